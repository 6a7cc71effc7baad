#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "splkit/generation.hpp"
#include "splkit/syntax.hpp"
#include "test_util.hpp"

using namespace splkit;

TEST_CASE("the expression line has exactly the twelve products of its constraint") {
    const ProductLine pl = load_fixture("epl.spl");
    const auto products = enumerate_products(pl);
    CHECK(products.size() == 12);

    // Independent enumeration: walk all 2^6 subsets and evaluate the formula.
    std::set<Product> expected;
    for (unsigned bits = 0; bits < 64; ++bits) {
        Product p;
        for (std::size_t i = 0; i < pl.features.size(); ++i)
            if (bits >> i & 1) p.insert(pl.features[i]);
        if (eval_formula(pl.formula, p)) expected.insert(p);
    }
    CHECK(expected.size() == 12);
    CHECK(std::set<Product>(products.begin(), products.end()) == expected);

    CHECK(expected.count({"Lit", "Print"}) == 1);
    CHECK(expected.count({"Add", "Eval1", "Lit", "Neg", "Print"}) == 1);
    CHECK(expected.count({"Eval1", "Eval2", "Lit", "Print"}) == 0);
    CHECK(expected.count({"Add", "Neg"}) == 0);  // Lit and Print are mandatory
}

TEST_CASE("activated deltas follow the application order") {
    const ProductLine pl = load_fixture("epl.spl");
    CHECK(activated_deltas(pl, {"Lit", "Neg", "Print"}) ==
          std::vector<std::string>{"DNeg", "DNegPrint", "DremAdd"});
    CHECK(activated_deltas(pl, {"Add", "Lit", "Print"}) == std::vector<std::string>{});
    CHECK(activated_deltas(pl, {"Add", "Eval2", "Lit", "Neg", "Print"}) ==
          std::vector<std::string>{"DNeg", "DNegPrint", "DOptionalPrint", "DAddEval2",
                                   "DLitEval2", "DNegEval2"});
}

TEST_CASE("adds is strict") {
    const Program p = program({cls("C", "Object", {field("int", "x")})});

    // Adding an existing class or attribute fails.
    try {
        apply_ado(adds_class(cls("C", "Object")), p);
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::AddExisting);
        CHECK(e.ref == Reference::class_ref("C"));
    }
    CHECK_THROWS_AS(apply_ado(adds_attr("C", field("int", "x")), p), ApplyError);

    // Adding an attribute to an absent class is a modification of a missing
    // element; the error names the class.
    try {
        apply_ado(adds_attr("D", field("int", "y")), p);
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::ModifyMissing);
        CHECK(e.ref == Reference::class_ref("D"));
    }

    // Successful adds append in place.
    const Program q = apply_ado(adds_attr("C", method("int", "m", e_int(7))), p);
    REQUIRE(q.find_class("C") != nullptr);
    CHECK(q.find_class("C")->attrs.size() == 2);
    CHECK(attr_decl_name(q.find_class("C")->attrs.back()) == "m");
}

TEST_CASE("removes is lenient") {
    const Program p = program({cls("C", "Object", {field("int", "x")})});

    CHECK(apply_ado(removes_ref(Reference::class_ref("Ghost")), p) == p);
    CHECK(apply_ado(removes_ref(Reference::attr_ref("C", "ghost")), p) == p);
    CHECK(apply_ado(removes_ref(Reference::attr_ref("Ghost", "x")), p) == p);

    CHECK(apply_ado(removes_ref(Reference::class_ref("C")), p).classes.empty());
    CHECK(apply_ado(removes_ref(Reference::attr_ref("C", "x")), p).find_class("C")->attrs.empty());
}

TEST_CASE("modifies rewrites methods and superclasses strictly") {
    const Program p = program({
        cls("A", "Object", {method("int", "m", e_int(1))}),
        cls("B", "A"),
    });

    // Plain modifies replaces the body.
    const Program q =
        apply_ado(modifies_method("A", MethodDecl{"int", "m", {}, e_int(2)}), p);
    CHECK(std::get<MethodDecl>(*q.find_class("A")->find_attr("m")).body == e_int(2));

    try {
        apply_ado(modifies_method("A", MethodDecl{"int", "ghost", {}, e_int(0)}), p);
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::ModifyMissing);
        CHECK(e.ref == Reference::attr_ref("A", "ghost"));
    }

    // Superclass retargeting, with cycle detection.
    const Program r = apply_ado(modifies_extends("B", "Object"), p);
    CHECK(r.find_class("B")->super == "Object");
    try {
        apply_ado(modifies_extends("A", "B"), p);
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::ExtendsCycle);
    }
}

TEST_CASE("wrapping modifies keeps the original body in a fresh auxiliary method") {
    const Program p = program({cls("A", "Object", {method("int", "m", e_int(1))})});

    const MethodDecl wrap{"int", "m", {}, e_bin('+', e_original(), e_int(10))};
    const Program q = apply_ado(modifies_method("A", wrap), p);

    const ClassDecl& a = *q.find_class("A");
    REQUIRE(a.attrs.size() == 2);
    // The auxiliary copy holds the old body and is appended at the end.
    const auto& aux = std::get<MethodDecl>(a.attrs.back());
    CHECK(aux.name == "m$orig$1");
    CHECK(aux.body == e_int(1));
    // The wrapper's original-call now targets the copy.
    const auto& m = std::get<MethodDecl>(*a.find_attr("m"));
    CHECK(m.body == e_bin('+', e_call(e_this(), "m$orig$1"), e_int(10)));

    // A second wrap numbers the next copy and snapshots the wrapped body.
    const Program r = apply_ado(modifies_method("A", wrap), q);
    const ClassDecl& a2 = *r.find_class("A");
    REQUIRE(a2.attrs.size() == 3);
    CHECK(attr_decl_name(a2.attrs.back()) == "m$orig$2");
    CHECK(std::get<MethodDecl>(*a2.find_attr("m$orig$2")).body ==
          e_bin('+', e_call(e_this(), "m$orig$1"), e_int(10)));

    // Removing the method sweeps its auxiliary copies, so numbering restarts.
    const Program s = apply_ado(removes_ref(Reference::attr_ref("A", "m")), r);
    CHECK(s.find_class("A")->attrs.empty());
    const Program t =
        apply_ado(modifies_method("A", wrap),
                  apply_ado(adds_attr("A", method("int", "m", e_int(5))), s));
    CHECK(t.find_class("A")->find_attr("m$orig$1") != nullptr);
    CHECK(t.find_class("A")->find_attr("m$orig$2") == nullptr);
}

TEST_CASE("readds upserts attributes of an existing class") {
    const Program p = program({cls("A", "Object", {method("int", "m", e_int(1))})});

    const Program q = apply_ado(readds_attr("A", method("int", "m", e_int(9))), p);
    CHECK(std::get<MethodDecl>(*q.find_class("A")->find_attr("m")).body == e_int(9));
    CHECK(q.find_class("A")->attrs.size() == 1);

    // Absent attribute: appended.
    const Program r = apply_ado(readds_attr("A", field("int", "x")), p);
    CHECK(r.find_class("A")->attrs.size() == 2);

    // Absent class: error names the class.
    try {
        apply_ado(readds_attr("Ghost", field("int", "x")), p);
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::ModifyMissing);
        CHECK(e.ref == Reference::class_ref("Ghost"));
    }
}

TEST_CASE("a module applies class removals, then class additions, then attribute ops") {
    const Program p = program({
        cls("A", "Object", {field("int", "x"), method("int", "m", e_int(1))}),
        cls("Z", "Object"),
    });

    DeltaModule d;
    d.name = "D";
    d.ops.push_back(removes_ref(Reference::class_ref("Z")));
    d.ops.push_back(adds_class(cls("B", "Object")));
    d.ops.push_back(adds_attr("B", field("int", "y")));  // attr of the class added above
    d.ops.push_back(removes_ref(Reference::attr_ref("A", "x")));
    d.sort_ops();

    const Program q = apply_module(d, p);
    CHECK(q.find_class("Z") == nullptr);
    REQUIRE(q.find_class("B") != nullptr);
    CHECK(q.find_class("B")->find_attr("y") != nullptr);
    CHECK(q.find_class("A")->find_attr("x") == nullptr);
    CHECK(q.find_class("A")->find_attr("m") != nullptr);
}

TEST_CASE("variant generation reproduces the base for the core product") {
    const ProductLine pl = load_fixture("epl.spl");

    // No delta is activated by {Lit, Print, Add}: the variant is the base.
    CHECK(generate_variant(pl, {"Lit", "Print", "Add"}) == pl.base);

    // {Lit, Print} additionally removes Add via DremAdd.
    const Program no_add = generate_variant(pl, {"Lit", "Print"});
    CHECK(no_add.find_class("Add") == nullptr);
    CHECK(no_add.find_class("Exp") != nullptr);
    CHECK(no_add.find_class("Lit") != nullptr);

    // A full product stacks the Neg and Eval1 layers.
    const Program full = generate_variant(pl, {"Lit", "Print", "Add", "Neg", "Eval1"});
    const auto d = program_dom(full);
    CHECK(d.count(Reference::class_ref("Neg")) == 1);
    CHECK(d.count(Reference::attr_ref("Neg", "toString")) == 1);
    CHECK(d.count(Reference::attr_ref("Exp", "eval")) == 1);
    CHECK(d.count(Reference::attr_ref("Add", "eval")) == 1);
    CHECK(std::get<MethodDecl>(*full.find_class("Exp")->find_attr("eval")).ret_type == "int");
    // DOptionalPrint wrapped Add.toString, so the auxiliary copy exists.
    CHECK(full.find_class("Add")->find_attr("toString$orig$1") != nullptr);
}

TEST_CASE("generation failures name the delta and the product") {
    ProductLine pl = make_line(
        {"F"}, f_true(), program({cls("C", "Object")}),
        {{"D1", f_atom("F"), {adds_class(cls("C", "Object"))}}});
    try {
        generate_variant(pl, {"F"});
        FAIL("expected ApplyError");
    } catch (const ApplyError& e) {
        CHECK(e.kind == ApplyErrorKind::AddExisting);
        CHECK(e.delta_name == "D1");
        CHECK(e.product == Product{"F"});
    }
    // The same line builds fine for the product that leaves D1 inactive.
    CHECK(generate_variant(pl, {}) == pl.base);
}

TEST_CASE("unambiguity flags comparable references of co-activatable modules") {
    const ProductLine epl = load_fixture("epl.spl");
    CHECK(check_unambiguity(epl).ok());

    auto line = [](Formula c1, Formula c2, Formula constraint) {
        return make_line(
            {"A", "B"}, std::move(constraint),
            program({cls("C", "Object", {method("int", "m", e_int(1))})}),
            {{"D1", std::move(c1), {modifies_method("C", MethodDecl{"int", "m", {}, e_int(2)})}},
             {"D2", std::move(c2), {removes_ref(Reference::class_ref("C"))}}},
            {{"D1", "D2"}});  // same partition
    };

    // C.m and C are comparable and both modules can be active together.
    const auto bad = check_unambiguity(line(f_atom("A"), f_true(), f_true()));
    REQUIRE(bad.findings.size() == 1);
    CHECK(bad.findings[0].partition == 0);
    CHECK(bad.findings[0].d1 == "D1");
    CHECK(bad.findings[0].d2 == "D2");
    CHECK(leq(bad.findings[0].r2, bad.findings[0].r1));

    // Mutually exclusive conditions cannot clash.
    CHECK(check_unambiguity(line(f_atom("A"), f_not(f_atom("A")), f_true())).ok());
    // Nor can conditions the feature model never enables together.
    CHECK(check_unambiguity(
              line(f_atom("A"), f_atom("B"), f_not(f_and(f_atom("A"), f_atom("B")))))
              .ok());
    // Incomparable references never clash.
    const ProductLine ok_line = make_line(
        {"A"}, f_true(),
        program({cls("C", "Object", {method("int", "m", e_int(1)), field("int", "x")})}),
        {{"D1", f_atom("A"), {modifies_method("C", MethodDecl{"int", "m", {}, e_int(2)})}},
         {"D2", f_atom("A"), {removes_ref(Reference::attr_ref("C", "x"))}}},
        {{"D1", "D2"}});
    CHECK(check_unambiguity(ok_line).ok());
}
