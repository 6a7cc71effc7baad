// Shared plumbing for the two refactoring engines.
#pragma once

#include <algorithm>

#include "splkit/refactor.hpp"

namespace splkit::refactor_detail {

// State threaded through one refactoring pass.
struct Pass {
    ProductLine work;
    FreshNamer namer;
    std::set<std::string> fresh;  // created this pass; exempt from scans

    explicit Pass(const ProductLine& input) : work(input), namer(input) {}

    // Modules of partitions strictly before d1's, scanned latest-first
    // (partition index descending, names ascending), skipping modules this
    // pass created. Snapshot taken now; callers re-check existence.
    std::vector<std::string> scan_before(const std::string& d1) const {
        std::vector<std::string> out;
        const std::size_t p1 = work.partition_of(d1);
        for (std::size_t pi = p1; pi-- > 0;)
            for (const auto& name : work.order[pi])
                if (!fresh.count(name)) out.push_back(name);
        return out;
    }

    void insert_into_partition(std::size_t pi, const std::string& name) {
        auto& part = work.order[pi];
        part.insert(std::upper_bound(part.begin(), part.end(), name), name);
    }

    void add_module(std::string name, std::vector<Ado> ops, Formula cond, std::size_t partition) {
        DeltaModule d;
        d.name = name;
        d.ops = std::move(ops);
        d.sort_ops();
        work.deltas.push_back(std::move(d));
        work.activation.emplace(name, std::move(cond));
        insert_into_partition(partition, name);
        fresh.insert(std::move(name));
    }

    // Erases `ado` (found by its reference) from the module; deletes the
    // module outright when that was its last operation. Returns the module's
    // partition index, which stays valid: the caller immediately inserts a
    // fresh module there.
    std::size_t take_op(const std::string& dname, const Reference& el) {
        const std::size_t pi = work.partition_of(dname);
        DeltaModule& d = *work.find_delta(dname);
        std::erase_if(d.ops, [&](const Ado& a) { return a.el == el; });
        if (d.ops.empty()) {
            std::erase_if(work.deltas, [&](const DeltaModule& m) { return m.name == dname; });
            work.activation.erase(dname);
            auto& part = work.order[pi];
            part.erase(std::find(part.begin(), part.end(), dname));
        }
        return pi;
    }

    // The merge step both engines share: ado2 leaves d2 for a fresh module
    // <d2>_<d1> active exactly when d2 was and d1 is not, in d2's partition.
    void merge_operation(const std::string& d2name, const Ado& ado2, const std::string& d1name) {
        Formula cond = f_and(work.activation.at(d2name), f_not(work.activation.at(d1name)));
        const std::size_t pi = take_op(d2name, ado2.el);
        add_module(namer.fresh(d2name + "_" + d1name), {ado2}, std::move(cond), pi);
    }
};

inline std::string ucfirst(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

// Naming hint for the fresh modules of the decreasing engine: the class name
// for class-level operations, ClassAttr for attribute-level ones.
inline std::string element_hint(const Ado& ado) {
    if (ado.el.is_class()) return ado.el.cls;
    return ado.el.cls + ucfirst(ado.el.attr);
}

}  // namespace splkit::refactor_detail
