#include "jetform/multiform.hpp"
#include "jetform/textio.hpp"
#include "testutil.hpp"

#include <doctest.h>

using namespace jetform;
using testutil::ExprGen;

namespace {

DiffPoly p(const char* src, const ContextPtr& ctx) { return parse_expr(src, ctx); }

EOMSystem sg_rules(const ContextPtr& ctx, int confluence = 4) {
    std::vector<EOMRule> rules;
    rules.push_back({Field{1}, MultiIndex({1, 1, 0}), p("sin(u)", ctx)});
    rules.push_back({Field{1}, MultiIndex({0, 0, 1}), p("u_x1x1x1 + 1/2*u_x1^3", ctx)});
    return EOMSystem(ctx, std::move(rules), confluence);
}

} // namespace

TEST_CASE("KForm antisymmetric access") {
    auto ctx = testutil::ctx_u3();
    KForm form(ctx, 2);
    form.set_coefficient({3, 1}, p("u", ctx));
    CHECK(form.coefficient({1, 3}) == p("-u", ctx));
    CHECK(form.coefficient({3, 1}) == p("u", ctx));
    CHECK(form.coefficient({1, 2}).is_zero());
    CHECK(form.coefficient({1, 1}).is_zero());
    CHECK_THROWS_AS(form.set_coefficient({1, 1}, p("u", ctx)), ContextError);
}

TEST_CASE("exterior derivative of a 1-form") {
    auto ctx = testutil::ctx_u2();
    KForm form(ctx, 1);
    form.set_coefficient({1}, p("u", ctx));
    KForm dl = exterior_derivative(form);
    CHECK(dl.coefficient({1, 2}) == p("-u_x2", ctx));
}

TEST_CASE("property: d of d vanishes") {
    for (int axes : {3, 4}) {
        auto ctx = Context::make(axes, {"u"}, {"u"});
        ExprGen gen(ctx, 1000 + axes, 2, 2);
        for (int round = 0; round < 50; ++round) {
            for (int degree : {1, 2}) {
                KForm form(ctx, degree);
                for (int reps = 0; reps < 3; ++reps) {
                    std::vector<int> tuple;
                    while (static_cast<int>(tuple.size()) < degree) {
                        int a = gen.uniform(1, axes);
                        bool dup = false;
                        for (int t : tuple) dup = dup || t == a;
                        if (!dup) tuple.push_back(a);
                    }
                    form.add_coefficient(tuple, gen.poly(2));
                }
                KForm dd = exterior_derivative(exterior_derivative(form));
                for (auto& [tuple, coeff] : dd.coefficients()) REQUIRE(coeff.is_zero());
            }
        }
    }
}

TEST_CASE("reduce_mod_eom") {
    auto ctx = testutil::ctx_u3();
    EOMSystem sys = sg_rules(ctx);
    CHECK(reduce_mod_eom(p("u_x1x1x2", ctx), sys) == p("cos(u)*u_x1", ctx));
    CHECK(reduce_mod_eom(p("sin(u) - u_x1x2", ctx), sys).is_zero());
    CHECK(reduce_mod_eom(p("u_x3 - u_x1x1x1 - 1/2*u_x1^3", ctx), sys).is_zero());
    // Homomorphism and compatibility with the total derivative.
    ExprGen gen(ctx, 8181, 2, 2);
    for (int round = 0; round < 40; ++round) {
        DiffPoly f = gen.poly(3), g = gen.poly(3);
        REQUIRE(reduce_mod_eom(f * g, sys) ==
                reduce_mod_eom(reduce_mod_eom(f, sys) * reduce_mod_eom(g, sys), sys));
        Axis a{gen.uniform(1, 3)};
        REQUIRE(reduce_mod_eom(total_derivative(f, a), sys) ==
                reduce_mod_eom(total_derivative(reduce_mod_eom(f, sys), a), sys));
    }
}

TEST_CASE("commuting_check") {
    auto ctx = testutil::ctx_u3();
    CHECK(commuting_check(sg_rules(ctx)));
    SUBCASE("incompatible flows are caught") {
        std::vector<EOMRule> rules;
        rules.push_back({Field{1}, MultiIndex({0, 1, 0}), p("u_x1^2", ctx)});
        rules.push_back({Field{1}, MultiIndex({0, 0, 1}), p("u", ctx)});
        CHECK_FALSE(commuting_check(EOMSystem(ctx, std::move(rules), 2)));
    }
    SUBCASE("single rule is trivially confluent") {
        std::vector<EOMRule> rules;
        rules.push_back({Field{1}, MultiIndex({1, 1, 0}), p("sin(u)", ctx)});
        CHECK(commuting_check(EOMSystem(ctx, std::move(rules), 3)));
    }
}

TEST_CASE("closure_check flags mutilated forms") {
    auto ctx = testutil::ctx_u3();
    EOMSystem sys = sg_rules(ctx);
    KForm form(ctx, 2);
    form.set_coefficient({1, 2}, p("1/2*u_x1*u_x2 - cos(u)", ctx));
    form.set_coefficient({2, 3},
                         p("-1/2*u_x2*u_x3 + u_x1x1*u_x1x2 - u_x1x1*sin(u) + 1/2*u_x1^2*cos(u)", ctx));
    form.set_coefficient({1, 3}, p("1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4", ctx));
    ClosureReport good = closure_check(form, sys);
    CHECK(good.closed);
    CHECK(good.double_zero);

    KForm broken = form;
    broken.set_coefficient({1, 3}, DiffPoly::zero(ctx));
    ClosureReport bad = closure_check(broken, sys);
    CHECK_FALSE(bad.closed);
}

TEST_CASE("multiform EL equations on the sine-Gordon form") {
    auto ctx = testutil::ctx_u3();
    KForm form(ctx, 2);
    form.set_coefficient({1, 2}, p("1/2*u_x1*u_x2 - cos(u)", ctx));
    form.set_coefficient({2, 3},
                         p("-1/2*u_x2*u_x3 + u_x1x1*u_x1x2 - u_x1x1*sin(u) + 1/2*u_x1^2*cos(u)", ctx));
    form.set_coefficient({1, 3}, p("1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4", ctx));

    bool found_sg = false;
    for (const ELEntry& e : multiform_el_equations(form)) {
        if (e.index == std::vector<int>{0, 0, 1}) {
            CHECK(e.expr == p("sin(u) - u_x1x2", ctx));
            found_sg = true;
        }
        if (e.index == std::vector<int>{0, 0, 0}) CHECK(e.expr.is_zero());
    }
    CHECK(found_sg);

    EOMSystem sys = sg_rules(ctx);
    EomReducer reducer(sys);
    for (const ELEntry& e : multiform_el_equations(form))
        REQUIRE(reducer.reduce(e.expr).is_zero());
    for (const ELEntry& e : multiform_el_direct(form))
        REQUIRE(reducer.reduce(e.expr).is_zero());
}

TEST_CASE("build_multiform zero symmetry") {
    auto ctx = testutil::ctx_u2();
    BuildResult built =
        build_multiform(p("1/2*u_x1^2", ctx), Characteristic::zero(ctx), Axis{2});
    CHECK(built.p.component(Axis{1}) == p("-u_x1*u_x2", ctx));
    CHECK(built.p.component(Axis{2}) == p("1/2*u_x1^2", ctx));
    CHECK(built.product == p("-u_x2*u_x1x1", ctx));
    KForm dl = exterior_derivative(built.form);
    CHECK(dl.coefficient({1, 2}) == p("u_x1x1*u_x2", ctx));
}

TEST_CASE("build_multiform reproduces the sine-Gordon coefficients") {
    // Gauge regression: the canonical slot normalization lands on the
    // balanced-derivative form, which for this case is the printed one.
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    Characteristic q(ctx, {p("-u_x1x1x1 - 1/2*u_x1^3", ctx)});
    BuildResult built = build_multiform(l, q, Axis{3});
    CHECK(built.form.coefficient({1, 2}) == l);
    CHECK(built.form.coefficient({1, 3}) ==
          p("1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4", ctx));
    CHECK(built.form.coefficient({2, 3}) ==
          p("-1/2*u_x2*u_x3 + u_x1x1*u_x1x2 - u_x1x1*sin(u) + 1/2*u_x1^2*cos(u)", ctx));
}

TEST_CASE("canonical_mod_divergences balances derivatives") {
    auto ctx = testutil::ctx_u2();
    CHECK(canonical_mod_divergences(p("u*u_x1x1", ctx), {Axis{1}}) == p("-u_x1^2", ctx));
    CHECK(canonical_mod_divergences(p("u_x1*u_x1x1", ctx), {Axis{1}}).is_zero());
    // Coset representatives coincide for gauge-equivalent inputs.
    DiffPoly f = p("u_x1^2*u_x2 + u*u_x1x1", ctx);
    DiffPoly g = f + total_derivative(p("u*u_x1*u_x2 - 3*u_x1x1*u_x1", ctx), Axis{1});
    CHECK(canonical_mod_divergences(f, {Axis{1}}) == canonical_mod_divergences(g, {Axis{1}}));
}

TEST_CASE("build_multiform validates inputs") {
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    CHECK_THROWS_AS(build_multiform(l, Characteristic(ctx, {p("u", ctx)}), Axis{3}),
                    SymmetryError);
    CHECK_THROWS_AS(build_multiform(l, Characteristic::zero(ctx), Axis{2}), ContextError);
    CHECK_THROWS_AS(
        build_multiform(l, Characteristic(ctx, {p("u_x3", ctx)}), Axis{3}), ContextError);
}

TEST_CASE("transfer_derivatives") {
    auto ctx = testutil::ctx_u2();
    SUBCASE("empty spec is the identity") {
        DiffPoly qt = p("u_x2", ctx), e = p("u_x1x1", ctx);
        TransferResult t =
            transfer_derivatives({qt}, {e}, {TransferSpec{GaussRat(1), MultiIndex(2)}});
        CHECK(t.qt[0] == qt);
        CHECK(t.e[0] == e);
        CHECK(t.boundary.is_zero());
    }
    SUBCASE("single transfer carries an exact boundary") {
        DiffPoly qt = p("u*u_x2", ctx);
        DiffPoly e = total_derivative(p("u*u_x1x1", ctx), Axis{1});
        TransferSpec spec{GaussRat::rational(2, 1), MultiIndex({1, 0})};
        TransferResult t = transfer_derivatives({qt}, {e}, {spec});
        CHECK(t.e[0] == p("2*u*u_x1x1", ctx));
        DiffPoly relation = t.qt[0] * t.e[0] + qt * e - divergence(t.boundary);
        CHECK(relation.is_zero());
    }
    SUBCASE("non-exact component is rejected") {
        auto sg = testutil::ctx_u3();
        CHECK_THROWS_AS(transfer_derivatives({p("u", sg)}, {p("sin(u) - u_x1x2", sg)},
                                             {TransferSpec{GaussRat(1), MultiIndex({1, 0, 0})}}),
                        NotExactError);
    }
}
