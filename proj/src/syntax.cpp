#include "splkit/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace splkit {

namespace {

// ---------------------------------------------------------------------------
// Lexer.
// ---------------------------------------------------------------------------

enum class Tok {
    Ident, Int, Str,
    LBrace, RBrace, LParen, RParen,
    Semi, Comma, Dot, Less, Assign, Bang, Plus, Star,
    AndAnd, OrOr,
    Eof,
};

struct Token {
    Tok kind;
    std::string text;
    long long num = 0;
    int line = 1, col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') { ++line; col = 1; } else { ++col; }
        }
        i += n;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            t.kind = Tok::Ident;
            t.text = text.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.kind = Tok::Int;
            t.text = text.substr(i, j - i);
            t.num = std::stoll(t.text);
            advance(j - i);
        } else if (c == '"') {
            std::string s;
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"') {
                if (text[j] == '\n') throw ParseError("newline in string literal", line, col);
                if (text[j] == '\\') {
                    if (j + 1 >= text.size()) throw ParseError("dangling escape in string literal", line, col);
                    s += text[j + 1];
                    j += 2;
                } else {
                    s += text[j];
                    ++j;
                }
            }
            if (j >= text.size()) throw ParseError("unterminated string literal", line, col);
            t.kind = Tok::Str;
            t.text = std::move(s);
            advance(j + 1 - i);
        } else {
            auto two = [&](char a, char b) {
                return c == a && i + 1 < text.size() && text[i + 1] == b;
            };
            if (two('&', '&')) { t.kind = Tok::AndAnd; advance(2); }
            else if (two('|', '|')) { t.kind = Tok::OrOr; advance(2); }
            else {
                switch (c) {
                    case '{': t.kind = Tok::LBrace; break;
                    case '}': t.kind = Tok::RBrace; break;
                    case '(': t.kind = Tok::LParen; break;
                    case ')': t.kind = Tok::RParen; break;
                    case ';': t.kind = Tok::Semi; break;
                    case ',': t.kind = Tok::Comma; break;
                    case '.': t.kind = Tok::Dot; break;
                    case '<': t.kind = Tok::Less; break;
                    case '=': t.kind = Tok::Assign; break;
                    case '!': t.kind = Tok::Bang; break;
                    case '+': t.kind = Tok::Plus; break;
                    case '*': t.kind = Tok::Star; break;
                    default:
                        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
                }
                advance(1);
            }
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Tok::Eof, "", 0, line, col});
    return out;
}

const char* tok_name(Tok k) {
    switch (k) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::Str: return "string";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Semi: return "';'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Less: return "'<'";
        case Tok::Assign: return "'='";
        case Tok::Bang: return "'!'";
        case Tok::Plus: return "'+'";
        case Tok::Star: return "'*'";
        case Tok::AndAnd: return "'&&'";
        case Tok::OrOr: return "'||'";
        case Tok::Eof: return "end of input";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parser. Validation that depends only on the text happens here so every
// rejection carries a position.
// ---------------------------------------------------------------------------

class Parser {
  public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    ProductLine parse_file() {
        ProductLine pl;
        parse_features(pl);
        parse_constraint(pl);
        parse_base(pl);
        while (at_kw("delta")) parse_delta(pl);
        parse_order(pl);
        expect(Tok::Eof, "end of file");
        // Safety net: parser-side checks are intended to subsume validate();
        // anything that still slips through is reported at the file start.
        try {
            validate(pl);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), 1, 1);
        }
        return pl;
    }

    Formula parse_formula_only(const std::vector<std::string>& features) {
        features_.insert(features.begin(), features.end());
        Formula f = parse_formula();
        expect(Tok::Eof, "end of formula");
        return f;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string> features_;
    std::set<std::string> delta_names_;

    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(msg, t.line, t.col);
    }

    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(const char* kw) const { return at(Tok::Ident) && peek().text == kw; }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
        return next();
    }
    Token expect_kw(const char* kw) {
        if (!at_kw(kw)) fail(peek(), std::string("expected '") + kw + "', found " + describe(peek()));
        return next();
    }
    std::string describe(const Token& t) const {
        if (t.kind == Tok::Ident) return "'" + t.text + "'";
        return tok_name(t.kind);
    }

    // -- sections ----------------------------------------------------------

    void parse_features(ProductLine& pl) {
        expect_kw("features");
        if (!at(Tok::Semi)) {
            for (;;) {
                Token t = expect(Tok::Ident, "feature name");
                if (!features_.insert(t.text).second) fail(t, "feature " + t.text + " declared twice");
                pl.features.push_back(t.text);
                if (!at(Tok::Comma)) break;
                next();
            }
        }
        expect(Tok::Semi, "';'");
    }

    void parse_constraint(ProductLine& pl) {
        expect_kw("constraint");
        pl.formula = parse_formula();
        expect(Tok::Semi, "';'");
    }

    void parse_base(ProductLine& pl) {
        expect_kw("base");
        expect(Tok::LBrace, "'{'");
        std::set<std::string> seen;
        while (!at(Tok::RBrace)) {
            Token at_tok = peek();
            ClassDecl c = parse_class_decl(false);
            if (!seen.insert(c.name).second) fail(at_tok, "class " + c.name + " declared twice");
            class_pos_.emplace(c.name, std::make_pair(at_tok.line, at_tok.col));
            pl.base.classes.push_back(std::move(c));
        }
        next();
        // Extends cycles among the base classes, reported at the class header.
        for (const auto& c : pl.base.classes) {
            std::set<std::string> chain{c.name};
            const ClassDecl* cur = pl.base.find_class(c.super);
            while (cur) {
                if (!chain.insert(cur->name).second) {
                    auto [l, col] = class_pos_.at(c.name);
                    throw ParseError("extends cycle through class " + cur->name, l, col);
                }
                cur = pl.base.find_class(cur->super);
            }
        }
    }

    void parse_delta(ProductLine& pl) {
        expect_kw("delta");
        Token name_tok = expect(Tok::Ident, "delta name");
        if (!delta_names_.insert(name_tok.text).second)
            fail(name_tok, "delta " + name_tok.text + " declared twice");
        expect_kw("when");
        Formula cond = parse_formula();
        expect(Tok::LBrace, "'{'");

        DeltaModule d;
        d.name = name_tok.text;
        std::set<Reference> refs;
        auto add_op = [&](const Token& where, Ado ado) {
            if (!refs.insert(ado.el).second)
                fail(where, "delta " + d.name + ": two operations target " + ado.el.str());
            d.ops.push_back(std::move(ado));
        };

        while (!at(Tok::RBrace)) {
            Token op_tok = peek();
            if (at_kw("adds")) {
                next();
                Token cls_tok = peek();
                ClassDecl c = parse_class_decl(false);
                add_op(cls_tok, Ado{AdoOp::Adds, Reference::class_ref(c.name), std::move(c)});
            } else if (at_kw("removes")) {
                next();
                Token cls = expect(Tok::Ident, "class name");
                expect(Tok::Semi, "';'");
                add_op(op_tok, Ado{AdoOp::Removes, Reference::class_ref(cls.text), std::monostate{}});
            } else if (at_kw("modifies")) {
                next();
                Token cls = expect(Tok::Ident, "class name");
                if (at_kw("extending")) {
                    next();
                    Token sup = expect(Tok::Ident, "superclass name");
                    add_op(op_tok, Ado{AdoOp::Modifies, Reference::attr_ref(cls.text, kExtendsAttr), sup.text});
                }
                expect(Tok::LBrace, "'{'");
                while (!at(Tok::RBrace)) parse_attr_op(d, cls.text, add_op);
                next();
            } else {
                fail(op_tok, "expected 'adds', 'removes' or 'modifies', found " + describe(op_tok));
            }
        }
        next();

        pl.activation.emplace(d.name, std::move(cond));
        d.sort_ops();
        pl.deltas.push_back(std::move(d));
    }

    template <typename AddOp>
    void parse_attr_op(DeltaModule& d, const std::string& cls, AddOp&& add_op) {
        Token op_tok = peek();
        if (at_kw("adds") || at_kw("readds")) {
            const AdoOp op = at_kw("adds") ? AdoOp::Adds : AdoOp::Readds;
            next();
            Token decl_tok = peek();
            AttrDecl a = parse_attr_decl(false);
            const std::string n = attr_decl_name(a);  // copy: the move below empties it
            if (n == kExtendsAttr) fail(decl_tok, "attribute may not be named 'extends'");
            AdoData data = std::visit([](auto& x) -> AdoData { return std::move(x); }, a);
            add_op(op_tok, Ado{op, Reference::attr_ref(cls, n), std::move(data)});
        } else if (at_kw("removes")) {
            next();
            Token attr = expect(Tok::Ident, "attribute name");
            if (attr.text == kExtendsAttr) fail(attr, "the extends slot cannot be removed");
            expect(Tok::Semi, "';'");
            add_op(op_tok, Ado{AdoOp::Removes, Reference::attr_ref(cls, attr.text), std::monostate{}});
        } else if (at_kw("modifies")) {
            next();
            Token decl_tok = peek();
            AttrDecl a = parse_attr_decl(true);
            const auto* m = std::get_if<MethodDecl>(&a);
            if (!m) fail(decl_tok, "modifies requires a method declaration");
            add_op(op_tok, Ado{AdoOp::Modifies, Reference::attr_ref(cls, m->name), std::move(*m)});
        } else {
            fail(op_tok, "expected 'adds', 'removes', 'modifies' or 'readds', found " + describe(op_tok));
        }
    }

    void parse_order(ProductLine& pl) {
        Token order_tok = peek();
        expect_kw("order");
        std::set<std::string> ordered;
        auto member = [&](std::vector<std::string>& part) {
            Token t = expect(Tok::Ident, "delta name");
            if (!delta_names_.count(t.text)) fail(t, "application order names unknown delta " + t.text);
            if (!ordered.insert(t.text).second) fail(t, "application order lists delta " + t.text + " twice");
            part.push_back(t.text);
        };
        if (!at(Tok::Semi)) {
            for (;;) {
                std::vector<std::string> part;
                if (at(Tok::LBrace)) {
                    next();
                    for (;;) {
                        member(part);
                        if (!at(Tok::Comma)) break;
                        next();
                    }
                    expect(Tok::RBrace, "'}'");
                } else {
                    member(part);
                }
                std::sort(part.begin(), part.end());
                pl.order.push_back(std::move(part));
                if (!at(Tok::Less)) break;
                next();
            }
        }
        expect(Tok::Semi, "';'");
        for (const auto& name : delta_names_)
            if (!ordered.count(name))
                fail(order_tok, "delta " + name + " missing from the application order");
    }

    // -- declarations --------------------------------------------------------

    ClassDecl parse_class_decl(bool in_modifies_payload) {
        expect_kw("class");
        Token name = expect(Tok::Ident, "class name");
        expect_kw("extends");
        Token super = expect(Tok::Ident, "superclass name");
        expect(Tok::LBrace, "'{'");
        ClassDecl c;
        c.name = name.text;
        c.super = super.text;
        std::set<std::string> seen;
        while (!at(Tok::RBrace)) {
            Token at_tok = peek();
            AttrDecl a = parse_attr_decl(in_modifies_payload);
            const std::string& n = attr_decl_name(a);
            if (n == kExtendsAttr) fail(at_tok, "attribute may not be named 'extends'");
            if (!seen.insert(n).second) fail(at_tok, "class " + c.name + " declares attribute " + n + " twice");
            c.attrs.push_back(std::move(a));
        }
        next();
        return c;
    }

    AttrDecl parse_attr_decl(bool original_allowed) {
        Token type = expect(Tok::Ident, "type name");
        Token name = expect(Tok::Ident, "attribute name");
        if (at(Tok::Semi)) {
            next();
            return FieldDecl{type.text, name.text};
        }
        expect(Tok::LParen, "'(' or ';'");
        MethodDecl m;
        m.ret_type = type.text;
        m.name = name.text;
        if (m.name == "original") fail(name, "method named 'original'");
        std::set<std::string> pnames;
        if (!at(Tok::RParen)) {
            for (;;) {
                Token pt = expect(Tok::Ident, "parameter type");
                Token pn = expect(Tok::Ident, "parameter name");
                if (pn.text == "this") fail(pn, "parameter named 'this'");
                if (!pnames.insert(pn.text).second) fail(pn, "duplicate parameter " + pn.text);
                m.params.push_back(Param{pt.text, pn.text});
                if (!at(Tok::Comma)) break;
                next();
            }
        }
        expect(Tok::RParen, "')'");
        Token body_tok = expect(Tok::LBrace, "'{'");
        m.body = parse_body();
        if (!original_allowed && contains_original(m.body))
            fail(body_tok, "original-call outside a method modifies");
        return m;
    }

    Expr parse_body() {
        std::vector<Expr> stmts;
        while (!at_kw("return")) {
            if (at(Tok::RBrace) || at(Tok::Eof))
                fail(peek(), "method body must end with a return statement");
            stmts.push_back(parse_expr());
            expect(Tok::Semi, "';'");
        }
        next();  // return
        Expr body = parse_expr();
        expect(Tok::Semi, "';'");
        expect(Tok::RBrace, "'}'");
        for (auto it = stmts.rbegin(); it != stmts.rend(); ++it)
            body = e_seq(std::move(*it), std::move(body));
        return body;
    }

    // -- expressions ---------------------------------------------------------

    bool at_expr_start() const {
        switch (peek().kind) {
            case Tok::Ident:
            case Tok::Int:
            case Tok::Str:
            case Tok::LParen:
                return true;
            default:
                return false;
        }
    }

    Expr parse_expr() {
        Token lhs_tok = peek();
        Expr lhs = parse_additive();
        if (!at(Tok::Assign)) return lhs;
        next();
        Expr rhs = parse_additive();
        if (lhs.kind == ExprKind::FieldAccess)
            return e_assign(std::move(lhs.kids[0]), lhs.name, std::move(rhs));
        if (lhs.kind == ExprKind::Var && lhs.name != "this")
            return e_assign(e_this(), lhs.name, std::move(rhs));  // sugar: x = e
        fail(lhs_tok, "assignment target must be a field");
    }

    Expr parse_additive() {
        Expr e = parse_mult();
        while (at(Tok::Plus)) {
            next();
            e = e_bin('+', std::move(e), parse_mult());
        }
        return e;
    }

    Expr parse_mult() {
        Expr e = parse_cast();
        while (at(Tok::Star)) {
            next();
            e = e_bin('*', std::move(e), parse_cast());
        }
        return e;
    }

    Expr parse_cast() {
        if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::RParen) {
            // "(C) e" is a cast only when an expression follows the parens.
            const Token& after = peek(3);
            const bool expr_follows = after.kind == Tok::Ident || after.kind == Tok::Int ||
                                      after.kind == Tok::Str || after.kind == Tok::LParen;
            if (expr_follows) {
                next();
                Token cls = next();
                next();
                return e_cast(cls.text, parse_cast());
            }
        }
        return parse_postfix();
    }

    Expr parse_postfix() {
        Expr e = parse_primary();
        while (at(Tok::Dot)) {
            next();
            Token name = expect(Tok::Ident, "member name");
            if (at(Tok::LParen)) {
                next();
                std::vector<Expr> args = parse_args();
                e = e_call(std::move(e), name.text, std::move(args));
            } else {
                e = e_field(std::move(e), name.text);
            }
        }
        return e;
    }

    std::vector<Expr> parse_args() {
        std::vector<Expr> args;
        if (!at(Tok::RParen)) {
            for (;;) {
                args.push_back(parse_expr());
                if (!at(Tok::Comma)) break;
                next();
            }
        }
        expect(Tok::RParen, "')'");
        return args;
    }

    Expr parse_primary() {
        Token t = peek();
        switch (t.kind) {
            case Tok::Int:
                next();
                return e_int(t.num);
            case Tok::Str:
                next();
                return e_str(t.text);
            case Tok::LParen: {
                next();
                Expr e = parse_expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident:
                if (t.text == "null") { next(); return e_null(); }
                if (t.text == "this") { next(); return e_this(); }
                if (t.text == "new") {
                    next();
                    Token cls = expect(Tok::Ident, "class name");
                    expect(Tok::LParen, "'('");
                    expect(Tok::RParen, "')'");
                    return e_new(cls.text);
                }
                if (t.text == "original") {
                    next();
                    expect(Tok::LParen, "'('");
                    return e_original(parse_args());
                }
                next();
                return e_var(t.text);
            default:
                fail(t, "expected an expression, found " + describe(t));
        }
    }

    // -- formulas -------------------------------------------------------------

    Formula parse_formula() { return parse_or(); }

    Formula parse_or() {
        Formula f = parse_and();
        while (at(Tok::OrOr)) {
            next();
            f = f_or(std::move(f), parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_funary();
        while (at(Tok::AndAnd)) {
            next();
            f = f_and(std::move(f), parse_funary());
        }
        return f;
    }

    Formula parse_funary() {
        Token t = peek();
        if (at(Tok::Bang)) {
            next();
            return f_not(parse_funary());
        }
        if (at(Tok::LParen)) {
            next();
            Formula f = parse_formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Ident)) {
            next();
            if (t.text == "true") return f_true();
            if (t.text == "false") return f_false();
            if (!features_.count(t.text)) fail(t, "unknown feature " + t.text);
            return f_atom(t.text);
        }
        fail(t, "expected a formula, found " + describe(t));
    }

    std::map<std::string, std::pair<int, int>> class_pos_;
};

// ---------------------------------------------------------------------------
// Printers.
// ---------------------------------------------------------------------------

// Precedence ladder for expression printing; higher binds tighter.
enum Prec { kPrecStmt = 0, kPrecAdd = 1, kPrecMul = 2, kPrecCast = 3, kPrecPostfix = 4 };

int expr_prec(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Seq:
        case ExprKind::FieldAssign: return kPrecStmt;
        case ExprKind::Binary: return e.op == '+' ? kPrecAdd : kPrecMul;
        case ExprKind::Cast: return kPrecCast;
        case ExprKind::FieldAccess:
        case ExprKind::MethodCall: return kPrecPostfix;
        default: return kPrecPostfix + 1;
    }
}

void print_expr_at(std::ostream& os, const Expr& e, int min_prec);

void print_args(std::ostream& os, const std::vector<Expr>& kids, std::size_t from) {
    os << "(";
    for (std::size_t i = from; i < kids.size(); ++i) {
        if (i > from) os << ", ";
        print_expr_at(os, kids[i], kPrecStmt);
    }
    os << ")";
}

void print_expr_bare(std::ostream& os, const Expr& e) {
    switch (e.kind) {
        case ExprKind::Var: os << e.name; break;
        case ExprKind::Null: os << "null"; break;
        case ExprKind::IntLit: os << e.num; break;
        case ExprKind::StrLit: {
            os << '"';
            for (char c : e.str) {
                if (c == '"' || c == '\\') os << '\\';
                os << c;
            }
            os << '"';
            break;
        }
        case ExprKind::FieldAccess:
            print_expr_at(os, e.kids[0], kPrecPostfix);
            os << "." << e.name;
            break;
        case ExprKind::MethodCall:
            print_expr_at(os, e.kids[0], kPrecPostfix);
            os << "." << e.name;
            print_args(os, e.kids, 1);
            break;
        case ExprKind::OriginalCall:
            os << "original";
            print_args(os, e.kids, 0);
            break;
        case ExprKind::New: os << "new " << e.name << "()"; break;
        case ExprKind::Cast:
            os << "(" << e.name << ") ";
            print_expr_at(os, e.kids[0], kPrecCast);
            break;
        case ExprKind::FieldAssign:
            print_expr_at(os, e.kids[0], kPrecPostfix);
            os << "." << e.name << " = ";
            print_expr_at(os, e.kids[1], kPrecAdd);
            break;
        case ExprKind::Binary:
            print_expr_at(os, e.kids[0], expr_prec(e));
            os << " " << e.op << " ";
            print_expr_at(os, e.kids[1], expr_prec(e) + 1);
            break;
        case ExprKind::Seq:
            // Sequences normally unfold as statements; nested ones fall back
            // to a parenthesized rendering that still reparses.
            print_expr_at(os, e.kids[0], kPrecStmt);
            os << "; ";
            print_expr_at(os, e.kids[1], kPrecStmt);
            break;
    }
}

void print_expr_at(std::ostream& os, const Expr& e, int min_prec) {
    if (expr_prec(e) < min_prec) {
        os << "(";
        print_expr_bare(os, e);
        os << ")";
    } else {
        print_expr_bare(os, e);
    }
}

void print_body(std::ostream& os, const Expr& body, const std::string& indent) {
    const Expr* cur = &body;
    while (cur->kind == ExprKind::Seq) {
        os << indent;
        print_expr_at(os, cur->kids[0], kPrecStmt);
        os << ";\n";
        cur = &cur->kids[1];
    }
    os << indent << "return ";
    print_expr_at(os, *cur, kPrecStmt);
    os << ";\n";
}

void print_method(std::ostream& os, const MethodDecl& m, const std::string& indent) {
    os << indent << m.ret_type << " " << m.name << "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (i) os << ", ";
        os << m.params[i].type << " " << m.params[i].name;
    }
    os << ") {\n";
    print_body(os, m.body, indent + "  ");
    os << indent << "}\n";
}

void print_attr(std::ostream& os, const AttrDecl& a, const std::string& indent) {
    if (const auto* f = std::get_if<FieldDecl>(&a)) {
        os << indent << f->type << " " << f->name << ";\n";
    } else {
        print_method(os, std::get<MethodDecl>(a), indent);
    }
}

void print_class(std::ostream& os, const ClassDecl& c, const std::string& indent) {
    os << indent << "class " << c.name << " extends " << c.super << " {\n";
    for (const auto& a : c.attrs) print_attr(os, a, indent + "  ");
    os << indent << "}\n";
}

// Prints a method declaration with the leading indent already consumed by an
// op keyword ("adds Ret m(...) { ... }").
void print_method_after_keyword(std::ostream& os, const MethodDecl& m, const std::string& indent) {
    std::ostringstream tmp;
    print_method(tmp, m, indent);
    os << tmp.str().substr(indent.size());
}

void print_attr_op(std::ostream& os, const Ado& ado, const std::string& indent) {
    switch (ado.op) {
        case AdoOp::Adds:
        case AdoOp::Readds:
            os << indent << (ado.op == AdoOp::Adds ? "adds " : "readds ");
            if (const auto* f = std::get_if<FieldDecl>(&ado.data))
                os << f->type << " " << f->name << ";\n";
            else
                print_method_after_keyword(os, std::get<MethodDecl>(ado.data), indent);
            break;
        case AdoOp::Removes:
            os << indent << "removes " << ado.el.attr << ";\n";
            break;
        case AdoOp::Modifies:
            os << indent << "modifies ";
            print_method_after_keyword(os, std::get<MethodDecl>(ado.data), indent);
            break;
    }
}

void print_delta(std::ostream& os, const ProductLine& pl, const DeltaModule& d) {
    os << "delta " << d.name << " when " << print_formula(pl.activation.at(d.name)) << " {\n";
    // ops are sorted by reference, so the operations of one class are
    // contiguous: class-level first, then its attribute block.
    std::size_t i = 0;
    while (i < d.ops.size()) {
        const Ado& ado = d.ops[i];
        if (ado.el.is_class()) {
            if (ado.op == AdoOp::Removes) {
                os << "  removes " << ado.el.cls << ";\n";
            } else {
                os << "  adds ";
                std::ostringstream tmp;
                print_class(tmp, std::get<ClassDecl>(ado.data), "  ");
                os << tmp.str().substr(2);
            }
            ++i;
            continue;
        }
        // Gather the attribute operations of this class.
        const std::string& cls = ado.el.cls;
        std::size_t j = i;
        const std::string* new_super = nullptr;
        while (j < d.ops.size() && d.ops[j].el.is_attr() && d.ops[j].el.cls == cls) {
            if (d.ops[j].el.attr == kExtendsAttr) new_super = &std::get<std::string>(d.ops[j].data);
            ++j;
        }
        os << "  modifies " << cls;
        if (new_super) os << " extending " << *new_super;
        os << " {\n";
        for (std::size_t k = i; k < j; ++k)
            if (d.ops[k].el.attr != kExtendsAttr) print_attr_op(os, d.ops[k], "    ");
        os << "  }\n";
        i = j;
    }
    os << "}\n";
}

}  // namespace

ProductLine parse_spl(const std::string& text) {
    Parser p(text);
    return p.parse_file();
}

Formula parse_formula(const std::string& text, const std::vector<std::string>& features) {
    Parser p(text);
    return p.parse_formula_only(features);
}

std::string print_formula(const Formula& f) {
    switch (f.kind) {
        case FormulaKind::True: return "true";
        case FormulaKind::False: return "false";
        case FormulaKind::Atom: return f.atom;
        case FormulaKind::Not:
            // And/Or render their own parentheses, so prefixing is enough.
            return "!" + print_formula(f.kids[0]);
        case FormulaKind::And:
            return "(" + print_formula(f.kids[0]) + " && " + print_formula(f.kids[1]) + ")";
        case FormulaKind::Or:
            return "(" + print_formula(f.kids[0]) + " || " + print_formula(f.kids[1]) + ")";
    }
    return "?";
}

std::string print_expr(const Expr& e) {
    std::ostringstream os;
    print_expr_at(os, e, kPrecStmt);
    return os.str();
}

std::string print_program(const Program& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        if (i) os << "\n";
        print_class(os, p.classes[i], "");
    }
    return os.str();
}

std::string print_spl(const ProductLine& pl) {
    std::ostringstream os;
    os << "features";
    for (std::size_t i = 0; i < pl.features.size(); ++i)
        os << (i ? ", " : " ") << pl.features[i];
    os << ";\n";
    os << "constraint " << print_formula(pl.formula) << ";\n\n";
    os << "base {\n";
    for (const auto& c : pl.base.classes) print_class(os, c, "  ");
    os << "}\n";
    for (const auto& d : pl.deltas) {
        os << "\n";
        print_delta(os, pl, d);
    }
    os << "\norder";
    for (std::size_t i = 0; i < pl.order.size(); ++i) {
        os << (i ? " < " : " ");
        const auto& part = pl.order[i];
        if (part.size() == 1) {
            os << part[0];
        } else {
            os << "{ ";
            for (std::size_t k = 0; k < part.size(); ++k) os << (k ? ", " : "") << part[k];
            os << " }";
        }
    }
    os << ";\n";
    return os.str();
}

}  // namespace splkit
