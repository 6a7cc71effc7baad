#include "splkit/generation.hpp"

#include <algorithm>

#include "splkit/analysis.hpp"

namespace splkit {

namespace {

void products_rec(const std::vector<std::string>& sorted_feats, std::size_t from,
                  Product& current, const Formula& constraint, std::vector<Product>& out) {
    if (eval_formula(constraint, current)) out.push_back(current);
    for (std::size_t i = from; i < sorted_feats.size(); ++i) {
        current.insert(sorted_feats[i]);
        products_rec(sorted_feats, i + 1, current, constraint, out);
        current.erase(sorted_feats[i]);
    }
}

}  // namespace

std::vector<Product> enumerate_products(const ProductLine& pl) {
    if (pl.features.size() > 20)
        throw UsageError("feature universe too large for product enumeration");
    std::vector<std::string> sorted = pl.features;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Product> out;
    Product current;
    products_rec(sorted, 0, current, pl.formula, out);
    return out;
}

std::vector<std::string> activated_deltas(const ProductLine& pl, const Product& product) {
    for (const auto& f : product)
        if (std::find(pl.features.begin(), pl.features.end(), f) == pl.features.end())
            throw UsageError("product selects undeclared feature " + f);
    if (!eval_formula(pl.formula, product))
        throw UsageError("product violates the feature-model constraint");
    std::vector<std::string> out;
    for (const auto& name : linearize_up(pl))
        if (eval_formula(pl.activation.at(name), product)) out.push_back(name);
    return out;
}

namespace {

std::string aux_prefix(const std::string& method) { return method + "$orig$"; }

// Drops the original-call copies accumulated for `method`.
void drop_aux_copies(ClassDecl& c, const std::string& method) {
    const std::string prefix = aux_prefix(method);
    std::erase_if(c.attrs, [&](const AttrDecl& a) {
        return attr_decl_name(a).rfind(prefix, 0) == 0;
    });
}

Expr rewrite_original(Expr e, const std::string& aux_name) {
    if (e.kind == ExprKind::OriginalCall) {
        std::vector<Expr> args;
        for (auto& k : e.kids) args.push_back(rewrite_original(std::move(k), aux_name));
        return e_call(e_this(), aux_name, std::move(args));
    }
    for (auto& k : e.kids) k = rewrite_original(std::move(k), aux_name);
    return e;
}

void insert_attr(ClassDecl& c, const AdoData& data) {
    if (const auto* f = std::get_if<FieldDecl>(&data))
        c.attrs.emplace_back(*f);
    else
        c.attrs.emplace_back(std::get<MethodDecl>(data));
}

}  // namespace

Program apply_ado(const Ado& ado, Program prog) {
    const Reference& el = ado.el;
    switch (ado.op) {
        case AdoOp::Adds: {
            if (el.is_class()) {
                if (prog.find_class(el.cls)) throw ApplyError(ApplyErrorKind::AddExisting, el);
                prog.classes.push_back(std::get<ClassDecl>(ado.data));
                if (has_extends_cycle(prog)) throw ApplyError(ApplyErrorKind::ExtendsCycle, el);
                return prog;
            }
            ClassDecl* c = prog.find_class(el.cls);
            if (!c) throw ApplyError(ApplyErrorKind::ModifyMissing, Reference::class_ref(el.cls));
            if (c->find_attr(el.attr)) throw ApplyError(ApplyErrorKind::AddExisting, el);
            insert_attr(*c, ado.data);
            return prog;
        }
        case AdoOp::Removes: {
            if (el.is_class()) {
                std::erase_if(prog.classes, [&](const ClassDecl& c) { return c.name == el.cls; });
                return prog;
            }
            if (ClassDecl* c = prog.find_class(el.cls)) {
                if (const AttrDecl* a = c->find_attr(el.attr)) {
                    const bool was_method = std::holds_alternative<MethodDecl>(*a);
                    std::erase_if(c->attrs, [&](const AttrDecl& x) { return attr_decl_name(x) == el.attr; });
                    if (was_method) drop_aux_copies(*c, el.attr);
                }
            }
            return prog;
        }
        case AdoOp::Modifies: {
            ClassDecl* c = prog.find_class(el.cls);
            if (!c) throw ApplyError(ApplyErrorKind::ModifyMissing, el);
            if (el.attr == kExtendsAttr) {
                c->super = std::get<std::string>(ado.data);
                if (has_extends_cycle(prog)) throw ApplyError(ApplyErrorKind::ExtendsCycle, el);
                return prog;
            }
            AttrDecl* a = c->find_attr(el.attr);
            if (!a || !std::holds_alternative<MethodDecl>(*a))
                throw ApplyError(ApplyErrorKind::ModifyMissing, el);
            MethodDecl& old = std::get<MethodDecl>(*a);
            MethodDecl replacement = std::get<MethodDecl>(ado.data);
            if (contains_original(replacement.body)) {
                // Number the copy after the copies already in the class, so
                // identical modification chains yield identical programs.
                int k = 1;
                for (const auto& attr : c->attrs)
                    if (attr_decl_name(attr).rfind(aux_prefix(el.attr), 0) == 0) ++k;
                const std::string aux_name = aux_prefix(el.attr) + std::to_string(k);
                MethodDecl aux = old;
                aux.name = aux_name;
                replacement.body = rewrite_original(std::move(replacement.body), aux_name);
                old = std::move(replacement);
                c->attrs.emplace_back(std::move(aux));
            } else {
                old = std::move(replacement);
            }
            return prog;
        }
        case AdoOp::Readds: {
            ClassDecl* c = prog.find_class(el.cls);
            if (!c) throw ApplyError(ApplyErrorKind::ModifyMissing, Reference::class_ref(el.cls));
            if (const AttrDecl* a = c->find_attr(el.attr)) {
                const bool was_method = std::holds_alternative<MethodDecl>(*a);
                std::erase_if(c->attrs, [&](const AttrDecl& x) { return attr_decl_name(x) == el.attr; });
                if (was_method) drop_aux_copies(*c, el.attr);
            }
            insert_attr(*c, ado.data);
            return prog;
        }
    }
    throw UsageError("apply_ado: unknown operation");
}

namespace {

std::string product_str(const Product& p) {
    std::string s = "{";
    bool first = true;
    for (const auto& f : p) {
        if (!first) s += ", ";
        s += f;
        first = false;
    }
    return s + "}";
}

// Deterministic application order within one module: class removes, class
// adds, then attribute-level operations; stored reference order inside each
// group. Any two references in one module are distinct, so groups only fix
// the class-level/attribute-level interleaving.
std::vector<const Ado*> module_application_order(const DeltaModule& d) {
    std::vector<const Ado*> class_removes, class_adds, attr_ops;
    for (const auto& ado : d.ops) {
        if (ado.el.is_class())
            (ado.op == AdoOp::Removes ? class_removes : class_adds).push_back(&ado);
        else
            attr_ops.push_back(&ado);
    }
    std::vector<const Ado*> out = std::move(class_removes);
    out.insert(out.end(), class_adds.begin(), class_adds.end());
    out.insert(out.end(), attr_ops.begin(), attr_ops.end());
    return out;
}

}  // namespace

Program apply_module(const DeltaModule& d, Program prog) {
    for (const Ado* ado : module_application_order(d)) prog = apply_ado(*ado, std::move(prog));
    return prog;
}

Program generate_variant(const ProductLine& pl, const Product& product) {
    Program prog = pl.base;
    for (const auto& name : activated_deltas(pl, product)) {
        try {
            prog = apply_module(*pl.find_delta(name), std::move(prog));
        } catch (const ApplyError& e) {
            ApplyError tagged(e.kind, e.ref,
                              std::string(e.what()) + " (delta " + name + ", product " +
                                  product_str(product) + ")");
            tagged.delta_name = name;
            tagged.product = product;
            throw tagged;
        }
    }
    return prog;
}

UnambiguityReport check_unambiguity(const ProductLine& pl) {
    UnambiguityReport report;
    for (std::size_t pi = 0; pi < pl.order.size(); ++pi) {
        const auto& part = pl.order[pi];
        for (std::size_t i = 0; i < part.size(); ++i) {
            for (std::size_t j = i + 1; j < part.size(); ++j) {
                const Formula both = f_and(pl.formula, f_and(pl.activation.at(part[i]),
                                                             pl.activation.at(part[j])));
                if (!satisfiable_over(both, pl.features)) continue;
                const DeltaModule* a = pl.find_delta(part[i]);
                const DeltaModule* b = pl.find_delta(part[j]);
                for (const auto& oa : a->ops)
                    for (const auto& ob : b->ops)
                        if (leq(oa.el, ob.el) || leq(ob.el, oa.el))
                            report.findings.push_back(
                                AmbiguityFinding{pi, part[i], part[j], oa.el, ob.el});
            }
        }
    }
    return report;
}

}  // namespace splkit
