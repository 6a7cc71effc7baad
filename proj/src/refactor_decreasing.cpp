#include "splkit/analysis.hpp"
#include "splkit/generation.hpp"
#include "refactor_common.hpp"

namespace splkit {

namespace {

using refactor_detail::Pass;
using refactor_detail::element_hint;

void manage_adds(Pass& pass, const std::string& d1, const Ado& ado1) {
    const std::vector<Reference> dom1 = dom(ado1);
    const std::set<Reference> dom1_set(dom1.begin(), dom1.end());

    // Removes aimed at the introduced elements leave their modules: once the
    // base owns the elements, those removes must not fire alongside d1.
    for (const auto& d2name : pass.scan_before(d1)) {
        const DeltaModule* d2 = pass.work.find_delta(d2name);
        if (!d2) continue;
        const std::vector<Ado> ops = d2->ops;
        for (const Ado& ado2 : ops)
            if (ado2.op == AdoOp::Removes && dom1_set.count(ado2.el))
                pass.merge_operation(d2name, ado2, d1);
    }

    // Complete the base program with the elements it lacks; split the rest.
    const std::set<Reference> base_owned = program_dom(pass.work.base);
    std::vector<Ado> readd_ops, remove_ops;
    const bool class_merged = ado1.el.is_class() && !base_owned.count(Reference::class_ref(ado1.el.cls));
    for (const Reference& el : dom1) {
        if (base_owned.count(el)) {
            // Already present: d1's payload becomes a readds active with d1.
            if (el.is_attr())
                readd_ops.push_back(Ado{AdoOp::Readds, el, data_at(ado1, el)});
            continue;
        }
        if (el.is_class()) {
            pass.work.base.classes.push_back(std::get<ClassDecl>(data_at(ado1, el)));
        } else {
            ClassDecl* c = pass.work.base.find_class(el.cls);
            if (!c)
                throw UsageError("refactor_decreasing: delta " + d1 + " introduces " + el.str() +
                                 " but no introduction of class " + el.cls + " precedes it");
            AdoData data = data_at(ado1, el);
            if (const auto* f = std::get_if<FieldDecl>(&data))
                c->attrs.emplace_back(*f);
            else
                c->attrs.emplace_back(std::get<MethodDecl>(data));
        }
        // Newly merged elements must vanish again when d1 is off. A removed
        // class takes its attributes with it.
        if (!(el.is_attr() && class_merged && el.cls == ado1.el.cls))
            remove_ops.push_back(Ado{AdoOp::Removes, el, std::monostate{}});
    }

    const std::size_t p1 = pass.work.partition_of(d1);
    const std::string hint = element_hint(ado1);
    if (!readd_ops.empty())
        pass.add_module(pass.namer.fresh("Dreadd" + hint + "_" + d1), std::move(readd_ops),
                        pass.work.activation.at(d1), p1);
    if (!remove_ops.empty())
        pass.add_module(pass.namer.fresh("Drem" + hint + "_" + d1), std::move(remove_ops),
                        f_not(pass.work.activation.at(d1)), p1);
}

}  // namespace

ProductLine refactor_decreasing(const ProductLine& pl) {
    validate(pl);
    Pass pass(pl);
    for (const auto& d1 : linearize_up(pl)) {
        DeltaModule* d = pass.work.find_delta(d1);
        if (!d) continue;
        std::vector<Ado> adds;
        for (const auto& ado : d->ops)
            if (ado.op == AdoOp::Adds) adds.push_back(ado);
        for (const Ado& ado1 : adds) {
            DeltaModule& cur = *pass.work.find_delta(d1);
            std::erase_if(cur.ops, [&](const Ado& a) { return a.el == ado1.el; });
            manage_adds(pass, d1, ado1);
        }
    }
    return pass.work;
}

}  // namespace splkit
