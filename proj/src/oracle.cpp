#include "splkit/oracle.hpp"

#include <algorithm>
#include <random>

#include "splkit/generation.hpp"

namespace splkit {

Program canonicalize(Program p) {
    std::sort(p.classes.begin(), p.classes.end(),
              [](const ClassDecl& a, const ClassDecl& b) { return a.name < b.name; });
    for (auto& c : p.classes) {
        std::stable_sort(c.attrs.begin(), c.attrs.end(), [](const AttrDecl& a, const AttrDecl& b) {
            const bool ma = std::holds_alternative<MethodDecl>(a);
            const bool mb = std::holds_alternative<MethodDecl>(b);
            if (ma != mb) return !ma;  // fields first
            return attr_decl_name(a) < attr_decl_name(b);
        });
    }
    return p;
}

namespace {

struct Outcome {
    bool error = false;
    Program prog;          // canonical, when !error
    ApplyErrorKind kind{};
    Reference ref;
};

Outcome run_product(const ProductLine& pl, const Product& p) {
    Outcome o;
    try {
        o.prog = canonicalize(generate_variant(pl, p));
    } catch (const ApplyError& e) {
        o.error = true;
        o.kind = e.kind;
        o.ref = e.ref;
    }
    return o;
}

std::string diff_hint(const Program& a, const Program& b) {
    std::set<std::string> names;
    for (const auto& c : a.classes) names.insert(c.name);
    for (const auto& c : b.classes) names.insert(c.name);
    for (const auto& n : names) {
        const ClassDecl* ca = a.find_class(n);
        const ClassDecl* cb = b.find_class(n);
        if (!ca) return "class " + n + " exists only in the second variant";
        if (!cb) return "class " + n + " exists only in the first variant";
        if (*ca != *cb) return "class " + n + " differs between the variants";
    }
    return "variants differ";
}

std::string error_str(const Outcome& o) {
    return std::string(to_string(o.kind)) + " at " + o.ref.str();
}

}  // namespace

EquivalenceVerdict check_equivalence(const ProductLine& a, const ProductLine& b) {
    EquivalenceVerdict v;
    const std::vector<Product> pa = enumerate_products(a);
    const std::vector<Product> pb = enumerate_products(b);
    const std::set<Product> sa(pa.begin(), pa.end());
    const std::set<Product> sb(pb.begin(), pb.end());
    for (const auto& p : pa)
        if (!sb.count(p)) v.witnesses.push_back({p, "product of the first line only"});
    for (const auto& p : pb)
        if (!sa.count(p)) v.witnesses.push_back({p, "product of the second line only"});
    for (const auto& p : pa) {
        if (!sb.count(p)) continue;
        ++v.products_compared;
        const Outcome oa = run_product(a, p);
        const Outcome ob = run_product(b, p);
        if (oa.error != ob.error) {
            v.witnesses.push_back({p, oa.error
                                          ? "first line errors (" + error_str(oa) + "), second yields a variant"
                                          : "second line errors (" + error_str(ob) + "), first yields a variant"});
        } else if (oa.error) {
            if (oa.kind != ob.kind || oa.ref != ob.ref)
                v.witnesses.push_back({p, "different errors: " + error_str(oa) + " vs " + error_str(ob)});
        } else if (!(oa.prog == ob.prog)) {
            v.witnesses.push_back({p, diff_hint(oa.prog, ob.prog)});
        }
    }
    v.equivalent = v.witnesses.empty();
    return v;
}

// ---------------------------------------------------------------------------
// Random product lines.
// ---------------------------------------------------------------------------

namespace {

// All randomness flows through untempered modulo draws so the stream is a
// stable function of the seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
    bool chance(int pct) { return below(100) < pct; }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
    }

  private:
    std::mt19937_64 eng_;
};

Formula random_formula(Rng& rng, const std::vector<std::string>& features, int depth) {
    if (depth == 0 || rng.chance(45)) {
        const int r = rng.below(10);
        if (r < 8 && !features.empty()) return f_atom(rng.pick(features));
        return r % 2 ? f_true() : f_false();
    }
    switch (rng.below(3)) {
        case 0: return f_not(random_formula(rng, features, depth - 1));
        case 1:
            return f_and(random_formula(rng, features, depth - 1),
                         random_formula(rng, features, depth - 1));
        default:
            return f_or(random_formula(rng, features, depth - 1),
                        random_formula(rng, features, depth - 1));
    }
}

struct Vocab {
    std::vector<std::string> classes;
    std::vector<std::string> fields;
    std::vector<std::string> methods;
    std::vector<std::string> types;  // field/param/return types
};

Expr random_expr(Rng& rng, const Vocab& vocab, int depth) {
    if (depth == 0 || rng.chance(45)) {
        switch (rng.below(5)) {
            case 0: return e_int(rng.below(100));
            case 1: return e_str("s" + std::to_string(rng.below(10)));
            case 2: return e_null();
            case 3: return e_this();
            default:
                return vocab.classes.empty() ? e_int(rng.below(10)) : e_new(rng.pick(vocab.classes));
        }
    }
    switch (rng.below(4)) {
        case 0: return e_bin('+', random_expr(rng, vocab, depth - 1), random_expr(rng, vocab, depth - 1));
        case 1: return e_bin('*', random_expr(rng, vocab, depth - 1), random_expr(rng, vocab, depth - 1));
        case 2: return e_field(e_this(), rng.pick(vocab.fields));
        default: return e_call(e_this(), rng.pick(vocab.methods), {random_expr(rng, vocab, depth - 1)});
    }
}

Expr random_plain_body(Rng& rng, const Vocab& vocab) {
    Expr result = random_expr(rng, vocab, 2);
    if (result.kind == ExprKind::Null) result = e_int(rng.below(10));  // keep distinct from voids
    if (rng.chance(30))
        return e_seq(e_assign(e_this(), rng.pick(vocab.fields), random_expr(rng, vocab, 1)), std::move(result));
    return result;
}

Expr random_wrap_body(Rng& rng, const Vocab& vocab) {
    if (rng.chance(40)) return e_original({});
    return e_bin('+', e_original({}), random_expr(rng, vocab, 1));
}

MethodDecl random_method(Rng& rng, const Vocab& vocab, const std::string& name) {
    MethodDecl m;
    m.ret_type = rng.pick(vocab.types);
    m.name = name;
    const int nparams = rng.below(3);
    static const std::vector<std::string> pnames = {"a", "b"};
    for (int i = 0; i < nparams; ++i) m.params.push_back(Param{rng.pick(vocab.types), pnames[i]});
    m.body = random_plain_body(rng, vocab);
    return m;
}

ClassDecl random_class(Rng& rng, const Vocab& vocab, const std::string& name,
                       const std::vector<std::string>& possible_supers) {
    ClassDecl c;
    c.name = name;
    c.super = (!possible_supers.empty() && rng.chance(50)) ? rng.pick(possible_supers) : "Object";
    for (const auto& f : vocab.fields)
        if (rng.chance(35)) c.attrs.emplace_back(FieldDecl{rng.pick(vocab.types), f});
    for (const auto& m : vocab.methods)
        if (rng.chance(35)) c.attrs.emplace_back(random_method(rng, vocab, m));
    return c;
}

// Presence probes against the per-product program states of the activating
// products; vacuously true when nothing activates the module.
bool class_in_all(const std::vector<Program>& states, const std::vector<int>& active,
                  const std::string& cls) {
    return std::all_of(active.begin(), active.end(),
                       [&](int i) { return states[static_cast<std::size_t>(i)].find_class(cls) != nullptr; });
}

bool attr_in_all(const std::vector<Program>& states, const std::vector<int>& active,
                 const std::string& cls, const std::string& attr) {
    return std::all_of(active.begin(), active.end(), [&](int i) {
        const ClassDecl* c = states[static_cast<std::size_t>(i)].find_class(cls);
        return c && c->find_attr(attr);
    });
}

bool method_in_all(const std::vector<Program>& states, const std::vector<int>& active,
                   const std::string& cls, const std::string& attr) {
    return std::all_of(active.begin(), active.end(), [&](int i) {
        const ClassDecl* c = states[static_cast<std::size_t>(i)].find_class(cls);
        const AttrDecl* a = c ? c->find_attr(attr) : nullptr;
        return a && std::holds_alternative<MethodDecl>(*a);
    });
}

bool attr_in_none(const std::vector<Program>& states, const std::vector<int>& active,
                  const std::string& cls, const std::string& attr) {
    return std::none_of(active.begin(), active.end(), [&](int i) {
        const ClassDecl* c = states[static_cast<std::size_t>(i)].find_class(cls);
        return c && c->find_attr(attr);
    });
}

}  // namespace

ProductLine generate_random_spl(const RandomSplSpec& spec) {
    Rng rng(spec.seed);
    ProductLine pl;

    const int n_features = 1 + rng.below(spec.max_features);
    for (int i = 0; i < n_features; ++i) pl.features.push_back("F" + std::to_string(i + 1));

    pl.formula = f_true();
    for (int attempt = 0; attempt < 20; ++attempt) {
        Formula f = random_formula(rng, pl.features, 2);
        if (satisfiable_over(f, pl.features)) {
            pl.formula = std::move(f);
            break;
        }
    }

    Vocab vocab;
    for (int i = 0; i < spec.max_classes; ++i) vocab.classes.push_back("C" + std::to_string(i + 1));
    for (int i = 0; i < spec.max_attrs_per_class; ++i) {
        vocab.fields.push_back("f" + std::to_string(i + 1));
        vocab.methods.push_back("m" + std::to_string(i + 1));
    }
    vocab.types = {"int", "String"};
    vocab.types.insert(vocab.types.end(), vocab.classes.begin(), vocab.classes.end());

    // Base program over a prefix of the class vocabulary.
    std::set<std::string> introduced;  // classes may be introduced once, line-wide
    const int n_base = rng.below(spec.max_classes + 1);
    for (int i = 0; i < n_base; ++i) {
        std::vector<std::string> supers(vocab.classes.begin(), vocab.classes.begin() + i);
        pl.base.classes.push_back(random_class(rng, vocab, vocab.classes[static_cast<std::size_t>(i)], supers));
        introduced.insert(pl.base.classes.back().name);
    }

    const std::vector<Product> products = enumerate_products(pl);
    std::vector<Program> states(products.size(), pl.base);
    std::vector<Reference> removed;  // removes targets, pairwise incomparable
    // Attributes introduced inside a delta's class-adds payload. An
    // attribute-level removes aimed at one of these is invisible to the
    // prefix-order scan of the increasing engine (only the whole class is
    // comparable), so the corpus keeps such removes out.
    std::map<std::string, std::set<std::string>> payload_attrs;

    struct Kind {
        int weight;
        int tag;  // 0 adds-class, 1 adds-attr, 2 removes, 3..5 modifies plain/wrap/void, 6 extends
    };
    std::vector<Kind> kinds = {{spec.w_adds_class, 0}, {spec.w_adds_attr, 1},   {spec.w_removes, 2},
                               {spec.w_modify_plain, 3}, {spec.w_modify_wrap, 4}, {spec.w_modify_void, 5},
                               {spec.w_modify_extends, 6}};
    const int total_weight = [&] {
        int t = 0;
        for (const auto& k : kinds) t += k.weight;
        return t;
    }();

    const int n_deltas = rng.below(spec.max_deltas + 1);
    for (int di = 0; di < n_deltas; ++di) {
        const std::string name = "D" + std::to_string(di + 1);
        const Formula cond = random_formula(rng, pl.features, 2);
        std::vector<int> active;
        for (std::size_t i = 0; i < products.size(); ++i)
            if (eval_formula(cond, products[i])) active.push_back(static_cast<int>(i));

        std::vector<Ado> ops;
        std::vector<Reference> refs;
        auto ref_free = [&](const Reference& r) {
            return std::none_of(refs.begin(), refs.end(),
                                [&](const Reference& q) { return leq(q, r) || leq(r, q); });
        };

        const int want = 1 + rng.below(spec.max_ops_per_delta);
        for (int oi = 0; oi < want; ++oi) {
            std::optional<Ado> made;
            int roll = total_weight > 0 ? rng.below(total_weight) : 0;
            std::size_t start = 0;
            for (; start < kinds.size(); ++start) {
                roll -= kinds[start].weight;
                if (roll < 0) break;
            }
            for (std::size_t step = 0; step < kinds.size() && !made; ++step) {
                const Kind& kind = kinds[(start + step) % kinds.size()];
                if (kind.weight == 0) continue;
                switch (kind.tag) {
                    case 0: {  // adds class
                        std::vector<std::string> cands;
                        for (const auto& c : vocab.classes)
                            if (!introduced.count(c) && ref_free(Reference::class_ref(c)))
                                cands.push_back(c);
                        if (cands.empty()) break;
                        const std::string cls = rng.pick(cands);
                        std::vector<std::string> supers(introduced.begin(), introduced.end());
                        ClassDecl decl = random_class(rng, vocab, cls, supers);
                        for (const auto& a : decl.attrs) payload_attrs[cls].insert(attr_decl_name(a));
                        made = Ado{AdoOp::Adds, Reference::class_ref(cls), std::move(decl)};
                        introduced.insert(cls);
                        break;
                    }
                    case 1: {  // adds attribute
                        std::vector<std::pair<Reference, bool>> cands;  // ref, is_method
                        for (const auto& c : vocab.classes) {
                            if (active.empty() || !class_in_all(states, active, c)) continue;
                            for (const auto& f : vocab.fields)
                                if (attr_in_none(states, active, c, f) && ref_free(Reference::attr_ref(c, f)))
                                    cands.push_back({Reference::attr_ref(c, f), false});
                            for (const auto& m : vocab.methods)
                                if (attr_in_none(states, active, c, m) && ref_free(Reference::attr_ref(c, m)))
                                    cands.push_back({Reference::attr_ref(c, m), true});
                        }
                        if (cands.empty()) break;
                        const auto& [ref, is_method] = rng.pick(cands);
                        AdoData data = is_method ? AdoData{random_method(rng, vocab, ref.attr)}
                                                 : AdoData{FieldDecl{rng.pick(vocab.types), ref.attr}};
                        made = Ado{AdoOp::Adds, ref, std::move(data)};
                        break;
                    }
                    case 2: {  // removes
                        std::vector<Reference> cands;
                        auto blocked = [&](const Reference& r) {
                            return std::any_of(removed.begin(), removed.end(), [&](const Reference& q) {
                                return leq(q, r) || leq(r, q);
                            });
                        };
                        for (const auto& c : vocab.classes) {
                            const Reference cr = Reference::class_ref(c);
                            if (!active.empty() && class_in_all(states, active, c) && !blocked(cr) && ref_free(cr))
                                cands.push_back(cr);
                            const auto pit = payload_attrs.find(c);
                            for (const auto& pool : {vocab.fields, vocab.methods})
                                for (const auto& a : pool) {
                                    if (pit != payload_attrs.end() && pit->second.count(a)) continue;
                                    const Reference ar = Reference::attr_ref(c, a);
                                    if (!active.empty() && attr_in_all(states, active, c, a) &&
                                        !blocked(ar) && ref_free(ar))
                                        cands.push_back(ar);
                                }
                        }
                        if (cands.empty()) break;
                        const Reference ref = rng.pick(cands);
                        made = Ado{AdoOp::Removes, ref, std::monostate{}};
                        removed.push_back(ref);
                        break;
                    }
                    case 3:
                    case 4:
                    case 5: {  // modifies method: plain / wrap / void
                        std::vector<Reference> cands;
                        for (const auto& c : vocab.classes)
                            for (const auto& m : vocab.methods)
                                if (!active.empty() && method_in_all(states, active, c, m) &&
                                    ref_free(Reference::attr_ref(c, m)))
                                    cands.push_back(Reference::attr_ref(c, m));
                        if (cands.empty()) break;
                        const Reference ref = rng.pick(cands);
                        MethodDecl m = random_method(rng, vocab, ref.attr);
                        if (kind.tag == 4) m.body = random_wrap_body(rng, vocab);
                        if (kind.tag == 5) m.body = e_null();
                        made = Ado{AdoOp::Modifies, ref, std::move(m)};
                        break;
                    }
                    case 6: {  // modifies extends; Object never closes a cycle
                        std::vector<std::string> cands;
                        for (const auto& c : vocab.classes) {
                            const Reference er = Reference::attr_ref(c, kExtendsAttr);
                            if (!active.empty() && class_in_all(states, active, c) && ref_free(er))
                                cands.push_back(c);
                        }
                        if (cands.empty()) break;
                        made = Ado{AdoOp::Modifies,
                                   Reference::attr_ref(rng.pick(cands), kExtendsAttr),
                                   std::string("Object")};
                        break;
                    }
                }
            }
            if (!made) break;
            refs.push_back(made->el);
            ops.push_back(std::move(*made));
        }
        if (ops.empty()) continue;

        DeltaModule d;
        d.name = name;
        d.ops = std::move(ops);
        d.sort_ops();

        // Placement: join the last partition only when every member touches
        // references incomparable with ours — even members that can never
        // co-activate, since the refactoring engines home fresh modules by
        // partition and disjointly-conditioned overlaps would collide there.
        bool join = !pl.order.empty() && rng.chance(45);
        if (join) {
            for (const auto& member : pl.order.back())
                for (const auto& oa : pl.find_delta(member)->ops)
                    for (const auto& ob : d.ops)
                        if (leq(oa.el, ob.el) || leq(ob.el, oa.el)) join = false;
        }

        // Advance the per-product states exactly as generation will.
        for (int i : active)
            states[static_cast<std::size_t>(i)] =
                apply_module(d, std::move(states[static_cast<std::size_t>(i)]));

        pl.deltas.push_back(std::move(d));
        pl.activation.emplace(name, cond);
        if (join)
            pl.order.back().push_back(name);
        else
            pl.order.push_back({name});
    }

    for (auto& part : pl.order) std::sort(part.begin(), part.end());

    // The construction is supposed to guarantee all three invariants; fail
    // loudly rather than hand the fuzzer a broken input.
    validate(pl);
    if (!check_unambiguity(pl).ok())
        throw SplError("generate_random_spl: ambiguous line from seed " + std::to_string(spec.seed));
    for (const auto& p : products) generate_variant(pl, p);
    return pl;
}

}  // namespace splkit
