// Core model for delta-oriented product lines over a Featherweight-Java-like
// kernel: IFJ programs, delta operations, feature formulas, product lines.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace splkit {

// ---------------------------------------------------------------------------
// References to program elements.
// ---------------------------------------------------------------------------

// Names a class or one attribute (field/method) of a class. The pseudo
// attribute "extends" names the superclass slot of a class.
struct Reference {
    std::string cls;
    std::string attr;  // empty: the class itself

    bool is_class() const { return attr.empty(); }
    bool is_attr() const { return !attr.empty(); }

    static Reference class_ref(std::string c) { return {std::move(c), {}}; }
    static Reference attr_ref(std::string c, std::string a) { return {std::move(c), std::move(a)}; }

    std::string str() const { return attr.empty() ? cls : cls + "." + attr; }

    auto operator<=>(const Reference&) const = default;
};

// Prefix order on references: el <= el' iff el == el', or el is a class and
// el' an attribute of that class. Partial: attrs of one class are incomparable.
bool leq(const Reference& a, const Reference& b);

// Name of the reserved superclass-slot attribute.
inline const std::string kExtendsAttr = "extends";

// ---------------------------------------------------------------------------
// Errors.
// ---------------------------------------------------------------------------

struct SplError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejected input text. Positions are 1-based.
struct ParseError : SplError {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : SplError(msg + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

// A structurally ill-formed product line (duplicate names, bad payloads, ...).
struct ValidationError : SplError {
    using SplError::SplError;
};

// API misuse: an operation applied outside its stated precondition.
struct UsageError : SplError {
    using SplError::SplError;
};

enum class ApplyErrorKind { AddExisting, RemoveMissing, ModifyMissing, ExtendsCycle };

const char* to_string(ApplyErrorKind k);

// Delta operation not applicable to the program at hand. `delta_name` and
// `product` are filled in by variant generation.
struct ApplyError : SplError {
    ApplyErrorKind kind;
    Reference ref;
    std::string delta_name;            // empty outside generation
    std::set<std::string> product;     // likewise
    ApplyError(ApplyErrorKind k, Reference r)
        : SplError(std::string(to_string(k)) + ": " + r.str()), kind(k), ref(std::move(r)) {}
    ApplyError(ApplyErrorKind k, Reference r, std::string msg)
        : SplError(std::move(msg)), kind(k), ref(std::move(r)) {}
};

// ---------------------------------------------------------------------------
// IFJ expressions. Method bodies are a single expression; a body written as
// "s1; ...; sn; return e;" is the right-nested sequence Seq(s1, ... Seq(sn, e)).
// ---------------------------------------------------------------------------

enum class ExprKind {
    Var,          // name (includes "this")
    Null,
    IntLit,       // num
    StrLit,       // str
    FieldAccess,  // kids[0].name
    MethodCall,   // kids[0].name(kids[1..])
    OriginalCall, // original(kids[0..]); only inside modifies-method payloads
    New,          // new name()
    Cast,         // (name) kids[0]
    FieldAssign,  // kids[0].name = kids[1]
    Binary,       // kids[0] op kids[1], op in {+, *}
    Seq,          // kids[0]; kids[1]
};

struct Expr {
    ExprKind kind = ExprKind::Null;
    std::string name;
    long long num = 0;
    std::string str;
    char op = 0;
    std::vector<Expr> kids;

    bool operator==(const Expr&) const = default;
};

Expr e_var(std::string name);
Expr e_this();
Expr e_null();
Expr e_int(long long v);
Expr e_str(std::string s);
Expr e_field(Expr obj, std::string attr);
Expr e_call(Expr obj, std::string method, std::vector<Expr> args = {});
Expr e_original(std::vector<Expr> args = {});
Expr e_new(std::string cls);
Expr e_cast(std::string cls, Expr inner);
Expr e_assign(Expr obj, std::string attr, Expr value);
Expr e_bin(char op, Expr lhs, Expr rhs);
Expr e_seq(Expr first, Expr rest);

// True iff the expression tree contains an original-call.
bool contains_original(const Expr& e);

// ---------------------------------------------------------------------------
// IFJ programs.
// ---------------------------------------------------------------------------

struct FieldDecl {
    std::string type;
    std::string name;
    bool operator==(const FieldDecl&) const = default;
};

struct Param {
    std::string type;
    std::string name;
    bool operator==(const Param&) const = default;
};

struct MethodDecl {
    std::string ret_type;
    std::string name;
    std::vector<Param> params;
    Expr body;
    bool operator==(const MethodDecl&) const = default;
};

using AttrDecl = std::variant<FieldDecl, MethodDecl>;

const std::string& attr_decl_name(const AttrDecl& a);

struct ClassDecl {
    std::string name;
    std::string super;  // "Object" for roots
    std::vector<AttrDecl> attrs;  // declaration order

    const AttrDecl* find_attr(const std::string& attr) const;
    AttrDecl* find_attr(const std::string& attr);
    bool operator==(const ClassDecl&) const = default;
};

struct Program {
    std::vector<ClassDecl> classes;  // declaration order

    const ClassDecl* find_class(const std::string& name) const;
    ClassDecl* find_class(const std::string& name);
    bool operator==(const Program&) const = default;
};

// All references declared by a program: every class plus its attributes.
std::set<Reference> program_dom(const Program& p);

// True iff following extends edges among the declared classes loops.
bool has_extends_cycle(const Program& p);

// Throws ValidationError on duplicate class names, duplicate attribute names
// within a class, a declared attribute named "extends", or an extends cycle.
void validate_program(const Program& p);

// ---------------------------------------------------------------------------
// Feature formulas.
// ---------------------------------------------------------------------------

enum class FormulaKind { True, False, Atom, Not, And, Or };

struct Formula {
    FormulaKind kind = FormulaKind::True;
    std::string atom;
    std::vector<Formula> kids;

    bool operator==(const Formula&) const = default;
};

Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_not(Formula f);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);

using Product = std::set<std::string>;

bool eval_formula(const Formula& f, const Product& selected);
void formula_atoms(const Formula& f, std::set<std::string>& out);

// Exhaustive checks over all 2^|features| assignments. Guarded against
// universes too large to enumerate.
bool satisfiable_over(const Formula& f, const std::vector<std::string>& features);
bool equivalent_over(const Formula& a, const Formula& b, const std::vector<std::string>& features);

// ---------------------------------------------------------------------------
// Delta operations and modules.
// ---------------------------------------------------------------------------

enum class AdoOp { Adds, Removes, Modifies, Readds };

const char* to_string(AdoOp op);

// Payload: ClassDecl for class-level adds/readds, FieldDecl/MethodDecl for
// attribute-level adds/readds and method modifies, the new superclass name
// for extends modifies, monostate for removes.
using AdoData = std::variant<std::monostate, ClassDecl, FieldDecl, MethodDecl, std::string>;

struct Ado {
    AdoOp op;
    Reference el;
    AdoData data;
    bool operator==(const Ado&) const = default;
};

// Canonical ADO order within a module: by reference, then op.
bool ado_less(const Ado& a, const Ado& b);

struct DeltaModule {
    std::string name;
    std::vector<Ado> ops;  // kept sorted by ado_less; references are distinct

    bool empty() const { return ops.empty(); }
    void sort_ops();
    bool operator==(const DeltaModule&) const = default;
};

// How a modifies of a method rewrites it. Throws UsageError unless the ADO is
// a modifies carrying a MethodDecl.
enum class ModifiesKind {
    Wraps,  // body contains an original-call
    Voids,  // body is exactly `return null`
    Plain,  // anything else
};

ModifiesKind classify_method_modifies(const Ado& ado);

// Elements an ADO introduces: a class adds/readds yields the class reference
// followed by one reference per declared attribute; an attribute-level
// adds/readds/modifies yields its own reference; removes yields nothing.
std::vector<Reference> dom(const Ado& ado);

// Payload fragment introduced at `el`; for a class reference this is the
// class shell (name and superclass, no attributes). Throws UsageError when
// el is not in dom(ado).
AdoData data_at(const Ado& ado, const Reference& el);

// ---------------------------------------------------------------------------
// Product lines.
// ---------------------------------------------------------------------------

struct ProductLine {
    std::vector<std::string> features;  // declaration order, unique
    Formula formula;
    Program base;
    std::vector<DeltaModule> deltas;    // stored order drives printing
    std::map<std::string, Formula> activation;   // delta name -> condition
    std::vector<std::vector<std::string>> order; // partitions; names sorted

    const DeltaModule* find_delta(const std::string& name) const;
    DeltaModule* find_delta(const std::string& name);
    // Index into `order`, or order.size() when the name is in no partition.
    std::size_t partition_of(const std::string& name) const;

    bool operator==(const ProductLine&) const = default;
};

// Structural well-formedness of a whole line; throws ValidationError with a
// message naming the offending element. Covers program invariants, payload
// shape, distinct references per module, activation/order coverage, formula
// atoms within the declared features, and original-call placement.
void validate(const ProductLine& pl);

}  // namespace splkit
