#include "splkit/analysis.hpp"

#include <algorithm>

namespace splkit {

std::vector<std::string> linearize_up(const ProductLine& pl) {
    std::vector<std::string> out;
    for (const auto& part : pl.order)
        for (const auto& name : part) out.push_back(name);  // partitions store sorted names
    return out;
}

std::vector<std::string> linearize_down(const ProductLine& pl) {
    std::vector<std::string> out;
    for (auto it = pl.order.rbegin(); it != pl.order.rend(); ++it)
        for (const auto& name : *it) out.push_back(name);
    return out;
}

const std::vector<std::string> kClassificationSlugs = {
    "strictly-increasing",
    "increasing",
    "pseudo-increasing",
    "strictly-decreasing",
    "decreasing",
    "pseudo-decreasing",
    "readd-strictly-decreasing",
    "readd-decreasing",
    "readd-pseudo-decreasing",
};

bool ClassificationReport::flag(const std::string& slug) const {
    if (slug == "strictly-increasing") return strictly_increasing;
    if (slug == "increasing") return increasing;
    if (slug == "pseudo-increasing") return pseudo_increasing;
    if (slug == "strictly-decreasing") return strictly_decreasing;
    if (slug == "decreasing") return decreasing;
    if (slug == "pseudo-decreasing") return pseudo_decreasing;
    if (slug == "readd-strictly-decreasing") return readd_strictly_decreasing;
    if (slug == "readd-decreasing") return readd_decreasing;
    if (slug == "readd-pseudo-decreasing") return readd_pseudo_decreasing;
    throw UsageError("unknown classification slug " + slug);
}

ClassificationReport classify(const ProductLine& pl) {
    ClassificationReport r;
    for (const auto& slug : kClassificationSlugs) r.evidence[slug];  // stable key set

    auto violate = [&](bool ClassificationReport::* flag, const std::string& slug,
                       const std::string& delta, const Ado& ado, const std::string& why) {
        r.*flag = false;
        r.evidence[slug].push_back(ClassViolation{delta, ado.el, ado.op, why});
    };

    for (const auto& d : pl.deltas) {
        for (const auto& ado : d.ops) {
            const bool is_method_mod =
                ado.op == AdoOp::Modifies && std::holds_alternative<MethodDecl>(ado.data);
            const bool wraps = is_method_mod && classify_method_modifies(ado) == ModifiesKind::Wraps;
            const bool voids = is_method_mod && classify_method_modifies(ado) == ModifiesKind::Voids;

            if (ado.op != AdoOp::Adds)
                violate(&ClassificationReport::strictly_increasing, "strictly-increasing",
                        d.name, ado, "operation is not an adds");
            if (!(ado.op == AdoOp::Adds || wraps))
                violate(&ClassificationReport::increasing, "increasing",
                        d.name, ado, "operation is neither an adds nor a wrapping modifies");
            if (ado.op == AdoOp::Removes)
                violate(&ClassificationReport::pseudo_increasing, "pseudo-increasing",
                        d.name, ado, "operation is a removes");

            if (ado.op != AdoOp::Removes)
                violate(&ClassificationReport::strictly_decreasing, "strictly-decreasing",
                        d.name, ado, "operation is not a removes");
            if (!(ado.op == AdoOp::Removes || voids))
                violate(&ClassificationReport::decreasing, "decreasing",
                        d.name, ado, "operation is neither a removes nor a voiding modifies");
            if (!(ado.op == AdoOp::Removes || ado.op == AdoOp::Modifies))
                violate(&ClassificationReport::pseudo_decreasing, "pseudo-decreasing",
                        d.name, ado, "operation is neither a removes nor a modifies");

            if (!(ado.op == AdoOp::Removes || ado.op == AdoOp::Readds))
                violate(&ClassificationReport::readd_strictly_decreasing, "readd-strictly-decreasing",
                        d.name, ado, "operation is neither a removes nor a readds");
            if (!(ado.op == AdoOp::Removes || ado.op == AdoOp::Readds || voids))
                violate(&ClassificationReport::readd_decreasing, "readd-decreasing",
                        d.name, ado, "operation is not a removes, readds or voiding modifies");
            if (!(ado.op == AdoOp::Removes || ado.op == AdoOp::Readds || ado.op == AdoOp::Modifies))
                violate(&ClassificationReport::readd_pseudo_decreasing, "readd-pseudo-decreasing",
                        d.name, ado, "operation is not a removes, readds or modifies");
        }
    }
    return r;
}

namespace {

// Removes the named modules from deltas, activation and order; partitions
// left empty disappear.
ProductLine drop_deltas(ProductLine pl, const std::set<std::string>& doomed) {
    std::erase_if(pl.deltas, [&](const DeltaModule& d) { return doomed.count(d.name) != 0; });
    std::erase_if(pl.activation, [&](const auto& kv) { return doomed.count(kv.first) != 0; });
    for (auto& part : pl.order)
        std::erase_if(part, [&](const std::string& n) { return doomed.count(n) != 0; });
    std::erase_if(pl.order, [](const std::vector<std::string>& part) { return part.empty(); });
    return pl;
}

}  // namespace

ProductLine project(const ProductLine& pl, const Formula& keep) {
    std::set<std::string> atoms;
    formula_atoms(keep, atoms);
    for (const auto& a : atoms)
        if (std::find(pl.features.begin(), pl.features.end(), a) == pl.features.end())
            throw UsageError("projection formula mentions undeclared feature " + a);

    if (keep == f_true()) return pl;

    ProductLine out = pl;
    out.formula = f_and(pl.formula, keep);
    // A never-activated delta is dead weight but harmless. Dropping happens at
    // partition granularity: a partition disappears only when none of its
    // members can ever be activated under the restricted formula, so the
    // application order keeps its shape wherever any member survives.
    std::set<std::string> doomed;
    for (const auto& part : pl.order) {
        bool all_dead = true;
        for (const auto& name : part) {
            if (satisfiable_over(f_and(out.formula, pl.activation.at(name)), pl.features)) {
                all_dead = false;
                break;
            }
        }
        if (all_dead) doomed.insert(part.begin(), part.end());
    }
    return drop_deltas(std::move(out), doomed);
}

ProductLine remove_empty_deltas(const ProductLine& pl) {
    std::set<std::string> doomed;
    for (const auto& d : pl.deltas)
        if (d.empty()) doomed.insert(d.name);
    return drop_deltas(pl, doomed);
}

}  // namespace splkit
