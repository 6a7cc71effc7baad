#include "splkit/model.hpp"

#include <algorithm>

namespace splkit {

bool leq(const Reference& a, const Reference& b) {
    if (a == b) return true;
    return a.is_class() && b.is_attr() && a.cls == b.cls;
}

const char* to_string(ApplyErrorKind k) {
    switch (k) {
        case ApplyErrorKind::AddExisting: return "add-existing";
        case ApplyErrorKind::RemoveMissing: return "remove-missing";
        case ApplyErrorKind::ModifyMissing: return "modify-missing";
        case ApplyErrorKind::ExtendsCycle: return "extends-cycle";
    }
    return "?";
}

const char* to_string(AdoOp op) {
    switch (op) {
        case AdoOp::Adds: return "adds";
        case AdoOp::Removes: return "removes";
        case AdoOp::Modifies: return "modifies";
        case AdoOp::Readds: return "readds";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Expressions.
// ---------------------------------------------------------------------------

Expr e_var(std::string name) {
    Expr e;
    e.kind = ExprKind::Var;
    e.name = std::move(name);
    return e;
}

Expr e_this() { return e_var("this"); }

Expr e_null() { return Expr{}; }

Expr e_int(long long v) {
    Expr e;
    e.kind = ExprKind::IntLit;
    e.num = v;
    return e;
}

Expr e_str(std::string s) {
    Expr e;
    e.kind = ExprKind::StrLit;
    e.str = std::move(s);
    return e;
}

Expr e_field(Expr obj, std::string attr) {
    Expr e;
    e.kind = ExprKind::FieldAccess;
    e.name = std::move(attr);
    e.kids.push_back(std::move(obj));
    return e;
}

Expr e_call(Expr obj, std::string method, std::vector<Expr> args) {
    Expr e;
    e.kind = ExprKind::MethodCall;
    e.name = std::move(method);
    e.kids.push_back(std::move(obj));
    for (auto& a : args) e.kids.push_back(std::move(a));
    return e;
}

Expr e_original(std::vector<Expr> args) {
    Expr e;
    e.kind = ExprKind::OriginalCall;
    e.kids = std::move(args);
    return e;
}

Expr e_new(std::string cls) {
    Expr e;
    e.kind = ExprKind::New;
    e.name = std::move(cls);
    return e;
}

Expr e_cast(std::string cls, Expr inner) {
    Expr e;
    e.kind = ExprKind::Cast;
    e.name = std::move(cls);
    e.kids.push_back(std::move(inner));
    return e;
}

Expr e_assign(Expr obj, std::string attr, Expr value) {
    Expr e;
    e.kind = ExprKind::FieldAssign;
    e.name = std::move(attr);
    e.kids.push_back(std::move(obj));
    e.kids.push_back(std::move(value));
    return e;
}

Expr e_bin(char op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.op = op;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    return e;
}

Expr e_seq(Expr first, Expr rest) {
    Expr e;
    e.kind = ExprKind::Seq;
    e.kids.push_back(std::move(first));
    e.kids.push_back(std::move(rest));
    return e;
}

bool contains_original(const Expr& e) {
    if (e.kind == ExprKind::OriginalCall) return true;
    for (const auto& k : e.kids)
        if (contains_original(k)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Programs.
// ---------------------------------------------------------------------------

const std::string& attr_decl_name(const AttrDecl& a) {
    if (const auto* f = std::get_if<FieldDecl>(&a)) return f->name;
    return std::get<MethodDecl>(a).name;
}

const AttrDecl* ClassDecl::find_attr(const std::string& attr) const {
    for (const auto& a : attrs)
        if (attr_decl_name(a) == attr) return &a;
    return nullptr;
}

AttrDecl* ClassDecl::find_attr(const std::string& attr) {
    for (auto& a : attrs)
        if (attr_decl_name(a) == attr) return &a;
    return nullptr;
}

const ClassDecl* Program::find_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

ClassDecl* Program::find_class(const std::string& name) {
    for (auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

std::set<Reference> program_dom(const Program& p) {
    std::set<Reference> out;
    for (const auto& c : p.classes) {
        out.insert(Reference::class_ref(c.name));
        for (const auto& a : c.attrs) out.insert(Reference::attr_ref(c.name, attr_decl_name(a)));
    }
    return out;
}

namespace {

void check_class_decl(const ClassDecl& c, const std::string& context) {
    std::set<std::string> seen;
    for (const auto& a : c.attrs) {
        const std::string& n = attr_decl_name(a);
        if (n == kExtendsAttr)
            throw ValidationError(context + ": class " + c.name + " declares reserved attribute 'extends'");
        if (!seen.insert(n).second)
            throw ValidationError(context + ": class " + c.name + " declares attribute " + n + " twice");
    }
}

}  // namespace

bool has_extends_cycle(const Program& p) {
    // Walks extends chains; edges leaving the declared classes terminate.
    for (const auto& c : p.classes) {
        std::set<std::string> seen{c.name};
        const ClassDecl* cur = p.find_class(c.super);
        while (cur) {
            if (!seen.insert(cur->name).second) return true;
            cur = p.find_class(cur->super);
        }
    }
    return false;
}

namespace {

void check_acyclic_extends(const Program& p, const std::string& context) {
    if (has_extends_cycle(p))
        throw ValidationError(context + ": extends cycle among the declared classes");
}

}  // namespace

void validate_program(const Program& p) {
    std::set<std::string> seen;
    for (const auto& c : p.classes) {
        if (!seen.insert(c.name).second)
            throw ValidationError("program declares class " + c.name + " twice");
        check_class_decl(c, "program");
    }
    check_acyclic_extends(p, "program");
}

// ---------------------------------------------------------------------------
// Formulas.
// ---------------------------------------------------------------------------

Formula f_true() { return Formula{}; }

Formula f_false() {
    Formula f;
    f.kind = FormulaKind::False;
    return f;
}

Formula f_atom(std::string name) {
    Formula f;
    f.kind = FormulaKind::Atom;
    f.atom = std::move(name);
    return f;
}

Formula f_not(Formula inner) {
    Formula f;
    f.kind = FormulaKind::Not;
    f.kids.push_back(std::move(inner));
    return f;
}

Formula f_and(Formula a, Formula b) {
    Formula f;
    f.kind = FormulaKind::And;
    f.kids.push_back(std::move(a));
    f.kids.push_back(std::move(b));
    return f;
}

Formula f_or(Formula a, Formula b) {
    Formula f;
    f.kind = FormulaKind::Or;
    f.kids.push_back(std::move(a));
    f.kids.push_back(std::move(b));
    return f;
}

bool eval_formula(const Formula& f, const Product& selected) {
    switch (f.kind) {
        case FormulaKind::True: return true;
        case FormulaKind::False: return false;
        case FormulaKind::Atom: return selected.count(f.atom) != 0;
        case FormulaKind::Not: return !eval_formula(f.kids[0], selected);
        case FormulaKind::And: return eval_formula(f.kids[0], selected) && eval_formula(f.kids[1], selected);
        case FormulaKind::Or: return eval_formula(f.kids[0], selected) || eval_formula(f.kids[1], selected);
    }
    return false;
}

void formula_atoms(const Formula& f, std::set<std::string>& out) {
    if (f.kind == FormulaKind::Atom) out.insert(f.atom);
    for (const auto& k : f.kids) formula_atoms(k, out);
}

namespace {

constexpr std::size_t kMaxEnumerableFeatures = 20;

void check_enumerable(const std::vector<std::string>& features) {
    if (features.size() > kMaxEnumerableFeatures)
        throw UsageError("feature universe too large for exhaustive evaluation (" +
                         std::to_string(features.size()) + " features)");
}

}  // namespace

bool satisfiable_over(const Formula& f, const std::vector<std::string>& features) {
    check_enumerable(features);
    const std::uint64_t n = std::uint64_t{1} << features.size();
    for (std::uint64_t bits = 0; bits < n; ++bits) {
        Product p;
        for (std::size_t i = 0; i < features.size(); ++i)
            if (bits >> i & 1) p.insert(features[i]);
        if (eval_formula(f, p)) return true;
    }
    return false;
}

bool equivalent_over(const Formula& a, const Formula& b, const std::vector<std::string>& features) {
    check_enumerable(features);
    const std::uint64_t n = std::uint64_t{1} << features.size();
    for (std::uint64_t bits = 0; bits < n; ++bits) {
        Product p;
        for (std::size_t i = 0; i < features.size(); ++i)
            if (bits >> i & 1) p.insert(features[i]);
        if (eval_formula(a, p) != eval_formula(b, p)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Delta operations.
// ---------------------------------------------------------------------------

bool ado_less(const Ado& a, const Ado& b) {
    if (a.el != b.el) return a.el < b.el;
    return static_cast<int>(a.op) < static_cast<int>(b.op);
}

void DeltaModule::sort_ops() {
    std::sort(ops.begin(), ops.end(), ado_less);
}

ModifiesKind classify_method_modifies(const Ado& ado) {
    if (ado.op != AdoOp::Modifies || !std::holds_alternative<MethodDecl>(ado.data))
        throw UsageError("classify_method_modifies: " + std::string(to_string(ado.op)) + " " +
                         ado.el.str() + " is not a method modifies");
    const auto& m = std::get<MethodDecl>(ado.data);
    if (contains_original(m.body)) return ModifiesKind::Wraps;
    if (m.body.kind == ExprKind::Null) return ModifiesKind::Voids;
    return ModifiesKind::Plain;
}

std::vector<Reference> dom(const Ado& ado) {
    std::vector<Reference> out;
    switch (ado.op) {
        case AdoOp::Removes:
            break;
        case AdoOp::Adds:
        case AdoOp::Readds:
            if (const auto* c = std::get_if<ClassDecl>(&ado.data)) {
                out.push_back(Reference::class_ref(c->name));
                for (const auto& a : c->attrs)
                    out.push_back(Reference::attr_ref(c->name, attr_decl_name(a)));
            } else {
                out.push_back(ado.el);
            }
            break;
        case AdoOp::Modifies:
            out.push_back(ado.el);
            break;
    }
    return out;
}

AdoData data_at(const Ado& ado, const Reference& el) {
    if (const auto* c = std::get_if<ClassDecl>(&ado.data)) {
        if (el == Reference::class_ref(c->name)) {
            ClassDecl shell;
            shell.name = c->name;
            shell.super = c->super;
            return shell;
        }
        if (el.is_attr() && el.cls == c->name) {
            if (const AttrDecl* a = c->find_attr(el.attr))
                return std::visit([](const auto& d) -> AdoData { return d; }, *a);
        }
        throw UsageError("data_at: " + el.str() + " is not introduced by this operation");
    }
    auto d = dom(ado);
    if (std::find(d.begin(), d.end(), el) == d.end())
        throw UsageError("data_at: " + el.str() + " is not introduced by this operation");
    return ado.data;
}

// ---------------------------------------------------------------------------
// Product lines.
// ---------------------------------------------------------------------------

const DeltaModule* ProductLine::find_delta(const std::string& name) const {
    for (const auto& d : deltas)
        if (d.name == name) return &d;
    return nullptr;
}

DeltaModule* ProductLine::find_delta(const std::string& name) {
    for (auto& d : deltas)
        if (d.name == name) return &d;
    return nullptr;
}

std::size_t ProductLine::partition_of(const std::string& name) const {
    for (std::size_t i = 0; i < order.size(); ++i)
        if (std::find(order[i].begin(), order[i].end(), name) != order[i].end()) return i;
    return order.size();
}

namespace {

void check_payload(const DeltaModule& d, const Ado& ado) {
    const std::string where = "delta " + d.name + ": " + to_string(ado.op) + " " + ado.el.str();
    auto fail = [&](const std::string& why) { throw ValidationError(where + ": " + why); };

    if (ado.el.attr == kExtendsAttr &&
        !(ado.op == AdoOp::Modifies && std::holds_alternative<std::string>(ado.data)))
        fail("the extends slot only supports modifies with a superclass name");

    switch (ado.op) {
        case AdoOp::Removes:
            if (!std::holds_alternative<std::monostate>(ado.data)) fail("removes carries a payload");
            break;
        case AdoOp::Adds:
        case AdoOp::Readds:
            if (ado.el.is_class()) {
                if (ado.op == AdoOp::Readds) fail("readds applies to attributes only");
                const auto* c = std::get_if<ClassDecl>(&ado.data);
                if (!c) fail("class-level adds requires a class declaration");
                if (c->name != ado.el.cls) fail("payload class name differs from the reference");
                check_class_decl(*c, where);
            } else {
                if (const auto* f = std::get_if<FieldDecl>(&ado.data)) {
                    if (f->name != ado.el.attr) fail("payload field name differs from the reference");
                } else if (const auto* m = std::get_if<MethodDecl>(&ado.data)) {
                    if (m->name != ado.el.attr) fail("payload method name differs from the reference");
                } else {
                    fail("attribute-level adds/readds requires a field or method declaration");
                }
            }
            break;
        case AdoOp::Modifies:
            if (ado.el.is_class()) fail("modifies targets an attribute or the extends slot");
            if (ado.el.attr == kExtendsAttr) {
                if (!std::holds_alternative<std::string>(ado.data)) fail("extends modifies requires a superclass name");
            } else if (const auto* m = std::get_if<MethodDecl>(&ado.data)) {
                if (m->name != ado.el.attr) fail("payload method name differs from the reference");
            } else {
                fail("method modifies requires a method declaration");
            }
            break;
    }
}

// original-calls may appear only inside modifies-method payloads.
void check_original_placement(const Expr& body, const std::string& where, bool allowed) {
    if (!allowed && contains_original(body))
        throw ValidationError(where + ": original-call outside a method modifies");
}

void check_method_decl(const MethodDecl& m, const std::string& where) {
    if (m.name == "original") throw ValidationError(where + ": method named 'original'");
    std::set<std::string> params;
    for (const auto& p : m.params) {
        if (p.name == "this") throw ValidationError(where + ": parameter named 'this'");
        if (!params.insert(p.name).second)
            throw ValidationError(where + ": duplicate parameter " + p.name);
    }
}

void check_class_bodies(const ClassDecl& c, const std::string& where) {
    for (const auto& a : c.attrs) {
        if (const auto* m = std::get_if<MethodDecl>(&a)) {
            check_method_decl(*m, where + ": class " + c.name + ", method " + m->name);
            check_original_placement(m->body, where + ": class " + c.name + ", method " + m->name, false);
        }
    }
}

}  // namespace

void validate(const ProductLine& pl) {
    // Features and formulas.
    std::set<std::string> feats;
    for (const auto& f : pl.features)
        if (!feats.insert(f).second) throw ValidationError("feature " + f + " declared twice");
    auto check_atoms = [&](const Formula& f, const std::string& where) {
        std::set<std::string> atoms;
        formula_atoms(f, atoms);
        for (const auto& a : atoms)
            if (!feats.count(a)) throw ValidationError(where + ": unknown feature " + a);
    };
    check_atoms(pl.formula, "feature-model constraint");

    // Base program.
    validate_program(pl.base);
    for (const auto& c : pl.base.classes) check_class_bodies(c, "base");

    // Delta modules.
    std::set<std::string> delta_names;
    for (const auto& d : pl.deltas) {
        if (!delta_names.insert(d.name).second)
            throw ValidationError("delta " + d.name + " declared twice");
        std::set<Reference> refs;
        for (const auto& ado : d.ops) {
            if (!refs.insert(ado.el).second)
                throw ValidationError("delta " + d.name + ": two operations target " + ado.el.str());
            check_payload(d, ado);
            const std::string where = "delta " + d.name + ": " + to_string(ado.op) + " " + ado.el.str();
            if (const auto* c = std::get_if<ClassDecl>(&ado.data)) {
                check_class_bodies(*c, where);
            } else if (const auto* m = std::get_if<MethodDecl>(&ado.data)) {
                check_method_decl(*m, where);
                check_original_placement(m->body, where, ado.op == AdoOp::Modifies);
            }
        }
    }

    // Activation map covers exactly the declared deltas.
    for (const auto& [name, cond] : pl.activation) {
        if (!delta_names.count(name))
            throw ValidationError("activation condition for unknown delta " + name);
        check_atoms(cond, "activation of " + name);
    }
    for (const auto& name : delta_names)
        if (!pl.activation.count(name))
            throw ValidationError("delta " + name + " has no activation condition");

    // Application order: non-empty partitions, pairwise disjoint, covering
    // exactly the declared deltas.
    std::set<std::string> ordered;
    for (const auto& part : pl.order) {
        if (part.empty()) throw ValidationError("application order contains an empty partition");
        for (const auto& name : part) {
            if (!delta_names.count(name))
                throw ValidationError("application order names unknown delta " + name);
            if (!ordered.insert(name).second)
                throw ValidationError("application order lists delta " + name + " twice");
        }
    }
    for (const auto& name : delta_names)
        if (!ordered.count(name))
            throw ValidationError("delta " + name + " missing from the application order");
}

}  // namespace splkit
