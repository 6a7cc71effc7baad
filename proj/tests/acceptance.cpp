// Acceptance harness: runs the eight shipping criteria end to end and prints
// exactly one PASS/FAIL line per criterion. Exits nonzero if any fail.
#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "splkit/analysis.hpp"
#include "splkit/generation.hpp"
#include "splkit/oracle.hpp"
#include "splkit/refactor.hpp"
#include "splkit/syntax.hpp"
#include "test_util.hpp"

using namespace splkit;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            why = msg;
        }
    }
};

// Generator parameters for the randomized criteria: up to 8 features, 12
// deltas and 6 classes, with the operation mix rotating so every trichotomy
// branch is exercised (plain mix, adds/removes only, wraps only, voids only).
RandomSplSpec corpus_spec(std::uint64_t seed) {
    RandomSplSpec s;
    s.seed = seed;
    s.max_features = 8;
    s.max_deltas = 12;
    s.max_classes = 6;
    switch (seed % 4) {
        case 1:
            s.w_modify_plain = s.w_modify_wrap = s.w_modify_void = s.w_modify_extends = 0;
            break;
        case 2:
            s.w_modify_plain = s.w_modify_void = s.w_modify_extends = 0;
            s.w_modify_wrap = 4;
            break;
        case 3:
            s.w_modify_plain = s.w_modify_wrap = s.w_modify_extends = 0;
            s.w_modify_void = 4;
            break;
        default:
            break;
    }
    return s;
}

std::size_t count_ops(const ProductLine& pl) {
    std::size_t n = 0;
    for (const auto& d : pl.deltas) n += d.ops.size();
    return n;
}

std::size_t count_op(const ProductLine& pl, AdoOp op) {
    std::size_t n = 0;
    for (const auto& d : pl.deltas)
        for (const auto& ado : d.ops) n += ado.op == op;
    return n;
}

// Multiset of every method body in the line: base classes plus all class and
// method payloads of the delta operations.
std::multiset<std::string> body_multiset(const ProductLine& pl) {
    std::multiset<std::string> out;
    auto take_class = [&](const ClassDecl& c) {
        for (const auto& a : c.attrs)
            if (const auto* m = std::get_if<MethodDecl>(&a)) out.insert(print_expr(m->body));
    };
    for (const auto& c : pl.base.classes) take_class(c);
    for (const auto& d : pl.deltas)
        for (const auto& ado : d.ops) {
            if (const auto* c = std::get_if<ClassDecl>(&ado.data)) take_class(*c);
            else if (const auto* m = std::get_if<MethodDecl>(&ado.data))
                out.insert(print_expr(m->body));
        }
    return out;
}

std::set<std::string> delta_names(const ProductLine& pl) {
    std::set<std::string> names;
    for (const auto& d : pl.deltas) names.insert(d.name);
    return names;
}

// Input operation mix, as the trichotomy statements see it.
struct OpMix {
    bool any_modifies = false;
    bool all_wraps = true;
    bool all_voids = true;
};

OpMix op_mix(const ProductLine& pl) {
    OpMix mix;
    for (const auto& d : pl.deltas)
        for (const auto& ado : d.ops) {
            if (ado.op != AdoOp::Modifies) continue;
            mix.any_modifies = true;
            const bool is_method = std::holds_alternative<MethodDecl>(ado.data);
            const auto kind = is_method ? classify_method_modifies(ado) : ModifiesKind::Plain;
            mix.all_wraps = mix.all_wraps && kind == ModifiesKind::Wraps;
            mix.all_voids = mix.all_voids && kind == ModifiesKind::Voids;
        }
    return mix;
}

// --- criterion bodies ---------------------------------------------------------

Check criterion_fixture_fidelity(const ProductLine& epl) {
    Check c;
    const auto start = Clock::now();

    c.require(epl.deltas.size() == 10, "expected 10 delta modules");
    c.require(epl.features.size() == 6, "expected 6 features");
    c.require(epl.order.size() == 5, "expected a 5-block application order");
    c.require(check_unambiguity(epl).ok(), "fixture must be unambiguous");

    const auto products = enumerate_products(epl);
    c.require(products.size() == 12, "expected exactly 12 products");

    // Independent cross-check: exhaustive walk over all 64 feature subsets.
    std::set<Product> expected;
    for (unsigned bits = 0; bits < 64; ++bits) {
        Product p;
        for (std::size_t i = 0; i < epl.features.size(); ++i)
            if (bits >> i & 1) p.insert(epl.features[i]);
        if (eval_formula(epl.formula, p)) expected.insert(p);
    }
    c.require(std::set<Product>(products.begin(), products.end()) == expected,
              "product enumeration disagrees with the exhaustive subset walk");

    c.require(seconds_since(start) < 1.0, "runtime exceeded 1 s");
    return c;
}

Check criterion_increasing_epl(const ProductLine& epl) {
    Check c;
    const auto start = Clock::now();
    const ProductLine out = refactor_increasing(epl);

    c.require(count_op(out, AdoOp::Removes) == 0, "output still contains removes");
    c.require(out.base.find_class("Add") == nullptr, "base program still owns class Add");

    const DeltaModule* fresh = out.find_delta("DNotDremAdd");
    c.require(fresh != nullptr, "missing the fresh re-adding module");
    if (fresh) {
        c.require(fresh->ops.size() == 1 && fresh->ops[0].op == AdoOp::Adds &&
                      std::get_if<ClassDecl>(&fresh->ops[0].data) != nullptr &&
                      std::get<ClassDecl>(fresh->ops[0].data) == *epl.base.find_class("Add"),
                  "fresh module must re-add the complete Add class");
        c.require(equivalent_over(out.activation.at("DNotDremAdd"), f_atom("Add"), out.features),
                  "fresh module activation must be satisfiability-equivalent to Add");
    }

    for (const char* orig : {"DOptionalPrint", "DAddEval1", "DAddEval2"}) {
        const std::string moved = std::string(orig) + "_DremAdd";
        const DeltaModule* d = out.find_delta(moved);
        c.require(d != nullptr, "missing re-homed module " + moved);
        if (!d) continue;
        c.require(d->ops == epl.find_delta(orig)->ops, moved + " must keep its operations");
        c.require(equivalent_over(out.activation.at(moved),
                                  f_and(epl.activation.at(orig), f_not(f_not(f_atom("Add")))),
                                  out.features),
                  moved + " must conjoin the negated removal condition");
    }

    const ClassificationReport r = classify(out);
    c.require(r.increasing, "output must classify increasing");
    c.require(!r.strictly_increasing, "output must not classify strictly-increasing");

    // Golden-file match modulo formula equivalence.
    const ProductLine golden = load_fixture("epl_increasing.spl");
    c.require(out.features == golden.features, "golden: feature list differs");
    c.require(equivalent_over(out.formula, golden.formula, out.features),
              "golden: constraint differs");
    c.require(out.base == golden.base, "golden: base program differs");
    c.require(out.order == golden.order, "golden: application order differs");
    c.require(delta_names(out) == delta_names(golden), "golden: module names differ");
    for (const auto& d : golden.deltas) {
        const DeltaModule* mine = out.find_delta(d.name);
        if (!mine) continue;
        c.require(mine->ops == d.ops, "golden: operations differ in " + d.name);
        c.require(equivalent_over(out.activation.at(d.name), golden.activation.at(d.name),
                                  out.features),
                  "golden: activation differs in " + d.name);
    }

    c.require(seconds_since(start) < 1.0, "runtime exceeded 1 s");
    return c;
}

Check criterion_decreasing_epl(const ProductLine& epl) {
    Check c;
    const auto start = Clock::now();
    const ProductLine out = refactor_decreasing(epl);

    c.require(count_op(out, AdoOp::Adds) == 0, "output still contains adds");

    std::size_t empties = 0;
    for (const auto& d : out.deltas) empties += d.empty();
    c.require(empties == 8, "expected exactly 8 empty modules before cleanup");

    const ClassDecl* neg = out.base.find_class("Neg");
    c.require(neg != nullptr, "base program must contain class Neg");
    for (const char* name : {"Exp", "Lit", "Add", "Neg"}) {
        const ClassDecl* cd = out.base.find_class(name);
        const AttrDecl* eval = cd ? cd->find_attr("eval") : nullptr;
        const auto* m = eval ? std::get_if<MethodDecl>(eval) : nullptr;
        c.require(m != nullptr && m->ret_type == "int",
                  std::string("base ") + name + " must carry the int-returning eval");
    }

    int readd_modules = 0;
    for (const auto& d : out.deltas)
        for (const auto& ado : d.ops)
            if (ado.op == AdoOp::Readds) {
                ++readd_modules;
                const auto* m = std::get_if<MethodDecl>(&ado.data);
                c.require(m != nullptr && m->ret_type == "Lit",
                          "re-added eval bodies must return Lit (in " + d.name + ")");
            }
    c.require(readd_modules == 4, "expected four re-adding operations for Eval2");

    c.require(classify(out).readd_pseudo_decreasing,
              "output must classify readd-pseudo-decreasing");

    c.require(seconds_since(start) < 1.0, "runtime exceeded 1 s");
    return c;
}

Check criterion_equivalence(const std::vector<ProductLine>& corpus) {
    Check c;
    const auto start = Clock::now();
    for (std::size_t i = 0; i < corpus.size() && c.ok; ++i) {
        const ProductLine& pl = corpus[i];
        c.require(check_equivalence(pl, refactor_increasing(pl)).equivalent,
                  "increasing direction not equivalent on corpus entry " + std::to_string(i));
        c.require(check_equivalence(pl, refactor_decreasing(pl)).equivalent,
                  "decreasing direction not equivalent on corpus entry " + std::to_string(i));
    }
    c.require(seconds_since(start) < 60.0, "runtime exceeded 60 s");
    return c;
}

Check criterion_trichotomy(const std::vector<ProductLine>& corpus) {
    Check c;
    for (std::size_t i = 0; i < corpus.size() && c.ok; ++i) {
        const ProductLine& pl = corpus[i];
        const OpMix mix = op_mix(pl);
        const std::string at = " on corpus entry " + std::to_string(i);

        const ClassificationReport ri = classify(refactor_increasing(pl));
        if (!mix.any_modifies)
            c.require(ri.strictly_increasing, "expected strictly-increasing" + at);
        else if (mix.all_wraps)
            c.require(ri.increasing, "expected increasing" + at);
        else
            c.require(ri.pseudo_increasing, "expected pseudo-increasing" + at);

        const ClassificationReport rd = classify(refactor_decreasing(pl));
        if (!mix.any_modifies)
            c.require(rd.readd_strictly_decreasing, "expected readd-strictly-decreasing" + at);
        else if (mix.all_voids)
            c.require(rd.readd_decreasing, "expected readd-decreasing" + at);
        else
            c.require(rd.readd_pseudo_decreasing, "expected readd-pseudo-decreasing" + at);
    }
    return c;
}

Check criterion_projection(const ProductLine& epl) {
    Check c;

    const ProductLine no_neg = project(epl, parse_formula("!Neg", epl.features));
    std::set<std::string> dropped;
    for (const auto& d : epl.deltas)
        if (!no_neg.find_delta(d.name)) dropped.insert(d.name);
    c.require(dropped == std::set<std::string>{"DNeg", "DNegPrint", "DOptionalPrint"},
              "projection on !Neg must drop exactly DNeg, DNegPrint, DOptionalPrint");

    const ProductLine no_eval2 = project(epl, parse_formula("!Eval2", epl.features));
    dropped.clear();
    for (const auto& d : epl.deltas)
        if (!no_eval2.find_delta(d.name)) dropped.insert(d.name);
    c.require(dropped == std::set<std::string>{"DLitEval2", "DAddEval2", "DNegEval2"},
              "projection on !Eval2 must drop exactly DLitEval2, DAddEval2, DNegEval2");

    for (const ProductLine* proj : {&no_neg, &no_eval2})
        for (const auto& p : enumerate_products(*proj))
            c.require(canonicalize(generate_variant(*proj, p)) ==
                          canonicalize(generate_variant(epl, p)),
                      "projection changed a variant on a surviving product");
    return c;
}

Check criterion_complexity_proxies(const std::vector<ProductLine>& corpus) {
    Check c;
    for (std::size_t i = 0; i < corpus.size() && c.ok; ++i) {
        const ProductLine& pl = corpus[i];
        const std::string at = " on corpus entry " + std::to_string(i);

        // Increasing: at most one fresh operation per removal.
        const ProductLine inc = refactor_increasing(pl);
        c.require(count_ops(inc) <= count_ops(pl) + count_op(pl, AdoOp::Removes),
                  "increasing operation-count bound violated" + at);

        // Decreasing: linear in the element-level size of the input.
        std::size_t add_elements = 0, other_ops = 0;
        for (const auto& d : pl.deltas)
            for (const auto& ado : d.ops) {
                if (ado.op == AdoOp::Adds) add_elements += dom(ado).size();
                else ++other_ops;
            }
        const ProductLine dec = refactor_decreasing(pl);
        c.require(count_ops(dec) <= add_elements + other_ops,
                  "decreasing element-level bound violated" + at);

        // Method bodies are moved, never duplicated or lost, in both directions.
        const auto bodies = body_multiset(pl);
        c.require(body_multiset(inc) == bodies, "increasing changed the body multiset" + at);
        c.require(body_multiset(dec) == bodies, "decreasing changed the body multiset" + at);
    }
    return c;
}

Check criterion_preservation_passes(const std::vector<ProductLine>& corpus) {
    Check c;
    for (std::size_t i = 0; i < corpus.size() && c.ok; ++i) {
        const ProductLine& pl = corpus[i];
        const std::string at = " on corpus entry " + std::to_string(i);

        c.require(check_equivalence(pl, parse_spl(print_spl(pl))).equivalent,
                  "print/parse round trip broke equivalence" + at);

        // Refactored lines are where empty modules actually appear.
        const ProductLine inc = refactor_increasing(pl);
        const ProductLine dec = refactor_decreasing(pl);
        c.require(check_equivalence(inc, remove_empty_deltas(inc)).equivalent,
                  "empty-delta cleanup broke the increasing output" + at);
        c.require(check_equivalence(dec, remove_empty_deltas(dec)).equivalent,
                  "empty-delta cleanup broke the decreasing output" + at);
        c.require(check_equivalence(dec, parse_spl(print_spl(dec))).equivalent,
                  "round trip broke the decreasing output" + at);
    }
    return c;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int idx, const std::string& label, const Check& c) {
        std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << label;
        if (!c.ok) std::cout << " — " << c.why;
        std::cout << "\n";
        failures += !c.ok;
    };
    auto guarded = [&](int idx, const std::string& label, auto&& fn) {
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("exception: ") + e.what();
        }
        report(idx, label, c);
    };

    ProductLine epl;
    try {
        epl = load_fixture("epl.spl");
    } catch (const std::exception& e) {
        std::cout << "FAIL criterion 1: fixture fidelity — cannot load fixture: " << e.what()
                  << "\n";
        return 1;
    }

    // Shared corpus: the expression line plus 200 seeded random lines.
    std::vector<ProductLine> corpus;
    corpus.push_back(epl);
    for (std::uint64_t seed = 1; seed <= 200; ++seed)
        corpus.push_back(generate_random_spl(corpus_spec(seed)));

    guarded(1, "expression-line fixture fidelity", [&] { return criterion_fixture_fidelity(epl); });
    guarded(2, "increasing refactoring of the expression line",
            [&] { return criterion_increasing_epl(epl); });
    guarded(3, "decreasing refactoring of the expression line",
            [&] { return criterion_decreasing_epl(epl); });
    guarded(4, "refactoring preserves products and variants on the corpus",
            [&] { return criterion_equivalence(corpus); });
    guarded(5, "monotonicity trichotomy on the corpus",
            [&] { return criterion_trichotomy(corpus); });
    guarded(6, "projection drop sets and variant preservation",
            [&] { return criterion_projection(epl); });
    guarded(7, "operation-count bounds and body-multiset preservation",
            [&] { return criterion_complexity_proxies(corpus); });
    guarded(8, "cleanup and round-trip preservation passes",
            [&] { return criterion_preservation_passes(corpus); });

    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 8 criteria passed\n";
    return 0;
}
