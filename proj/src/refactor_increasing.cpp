#include "splkit/analysis.hpp"
#include "splkit/generation.hpp"
#include "refactor_common.hpp"

namespace splkit {

FreshNamer::FreshNamer(const ProductLine& pl) {
    for (const auto& d : pl.deltas) used_.insert(d.name);
}

std::string FreshNamer::fresh(const std::string& stem) {
    if (used_.insert(stem).second) return stem;
    for (int k = 2;; ++k) {
        std::string cand = stem + "_" + std::to_string(k);
        if (used_.insert(cand).second) return cand;
    }
}

namespace {

using refactor_detail::Pass;

void manage_removes(Pass& pass, const std::string& d1, const Ado& ado1) {
    // Earlier introductions of the removed element leave their modules; they
    // must not apply when d1 undoes them right away.
    std::vector<std::size_t> merged_partitions;
    for (const auto& d2name : pass.scan_before(d1)) {
        const DeltaModule* d2 = pass.work.find_delta(d2name);
        if (!d2) continue;
        const std::vector<Ado> ops = d2->ops;
        for (const Ado& ado2 : ops) {
            if (!leq(ado1.el, ado2.el)) continue;
            merged_partitions.push_back(pass.work.partition_of(d2name));
            pass.merge_operation(d2name, ado2, d1);
        }
    }

    // An element owned by the base program moves into a fresh module that is
    // active exactly while d1 is not, ordered before everything just merged.
    AdoData data;
    bool in_base = false;
    if (ado1.el.is_class()) {
        if (const ClassDecl* c = pass.work.base.find_class(ado1.el.cls)) {
            data = *c;
            in_base = true;
        }
    } else if (const ClassDecl* c = pass.work.base.find_class(ado1.el.cls)) {
        if (const AttrDecl* a = c->find_attr(ado1.el.attr)) {
            data = std::visit([](const auto& x) -> AdoData { return x; }, *a);
            in_base = true;
        }
    }
    if (!in_base) return;

    pass.work.base = apply_ado(Ado{AdoOp::Removes, ado1.el, std::monostate{}},
                               std::move(pass.work.base));
    const std::size_t at = merged_partitions.empty()
                               ? 0
                               : *std::min_element(merged_partitions.begin(), merged_partitions.end());
    pass.work.order.insert(pass.work.order.begin() + static_cast<std::ptrdiff_t>(at),
                           std::vector<std::string>{});
    pass.add_module(pass.namer.fresh("DNot" + d1), {Ado{AdoOp::Adds, ado1.el, std::move(data)}},
                    f_not(pass.work.activation.at(d1)), at);
}

}  // namespace

ProductLine refactor_increasing(const ProductLine& pl) {
    validate(pl);
    Pass pass(pl);
    for (const auto& d1 : linearize_up(pl)) {
        DeltaModule* d = pass.work.find_delta(d1);
        if (!d) continue;
        std::vector<Ado> removes;
        for (const auto& ado : d->ops)
            if (ado.op == AdoOp::Removes) removes.push_back(ado);
        for (const Ado& ado1 : removes) {
            // The module survives even when emptied; only merges delete modules.
            DeltaModule& cur = *pass.work.find_delta(d1);
            std::erase_if(cur.ops, [&](const Ado& a) { return a.el == ado1.el; });
            manage_removes(pass, d1, ado1);
        }
    }
    return pass.work;
}

}  // namespace splkit
