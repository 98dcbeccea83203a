#include "jetform/textio.hpp"
#include "testutil.hpp"

#include <doctest.h>

using namespace jetform;
using testutil::ExprGen;

namespace {

DiffPoly p(const char* src, const ContextPtr& ctx) { return parse_expr(src, ctx); }

} // namespace

TEST_CASE("ring operations") {
    auto ctx = testutil::ctx_u3();
    CHECK((p("u", ctx) + p("-u", ctx)).is_zero());
    CHECK(p("u_x1", ctx) * p("u_x1", ctx) == p("u_x1^2", ctx));
    CHECK(p("cos(u)", ctx) * p("cos(u)", ctx) == p("1 - sin(u)^2", ctx));
    CHECK(p("(u + u_x1)^3", ctx) == p("u^3 + 3*u^2*u_x1 + 3*u*u_x1^2 + u_x1^3", ctx));
    CHECK_THROWS_AS(p("u", ctx) + p("u", testutil::ctx_u2()), ContextError);
}

TEST_CASE("trig normal form") {
    auto ctx = testutil::ctx_u3();
    CHECK(p("sin(u)^2 + cos(u)^2 - 1", ctx).is_zero());
    CHECK(p("cos(u)^3", ctx) == p("cos(u) - sin(u)^2*cos(u)", ctx));
    CHECK(p("cos(u)^4", ctx) == p("1 - 2*sin(u)^2 + sin(u)^4", ctx));
    // Normal form is idempotent: re-adding the printed form changes nothing.
    DiffPoly f = p("cos(u)^5 - sin(u)*cos(u)^2 + u_x1*cos(u)^2", ctx);
    CHECK(parse_expr(print_expr(f), ctx) == f);
}

TEST_CASE("total derivative basics") {
    auto ctx = testutil::ctx_u3();
    CHECK(total_derivative(p("u", ctx), Axis{1}) == p("u_x1", ctx));
    CHECK(total_derivative(p("u*u_x2", ctx), Axis{1}) == p("u_x1*u_x2 + u*u_x1x2", ctx));
    CHECK(total_derivative(p("sin(u)", ctx), Axis{1}) == p("cos(u)*u_x1", ctx));
    CHECK(total_derivative(p("x1*x2^2", ctx), Axis{2}) == p("2*x1*x2", ctx));
    CHECK(total_derivative(p("x2", ctx), Axis{1}).is_zero());
}

TEST_CASE("multi-index total derivative") {
    auto ctx = testutil::ctx_u2();
    CHECK(total_derivative(p("u", ctx), MultiIndex({1, 1})) == p("u_x1x2", ctx));
    DiffPoly f = p("u*u_x1x2 - sin(u)", ctx);
    CHECK(total_derivative(f, MultiIndex({0, 0})) == f);
    CHECK(total_derivative(p("u^2", ctx), MultiIndex({2, 0})) ==
          p("2*u_x1^2 + 2*u*u_x1x1", ctx));
}

TEST_CASE("partial_jet") {
    auto ctx = testutil::ctx_u3();
    auto jet = [&](const char* run) {
        return Generator::jet_of(Field{1}, parse_expr(run, ctx).jet_profile().begin()->index);
    };
    CHECK(partial_jet(p("u_x1^2", ctx), jet("u_x1")) == p("2*u_x1", ctx));
    CHECK(partial_jet(p("u*u_x1x2", ctx), jet("u_x1x2")) == p("u", ctx));
    CHECK(partial_jet(p("-cos(u)", ctx), jet("u")) == p("sin(u)", ctx));
    CHECK(partial_jet(p("u_x2", ctx), jet("u_x1")).is_zero());
}

TEST_CASE("max_order and jet_profile") {
    auto ctx = testutil::ctx_u3();
    CHECK(p("u_x1x1x1", ctx).max_order() == 3);
    CHECK(p("cos(u)", ctx).max_order() == 0);
    auto ctx2 = Context::make(3, {"u", "v"});
    CHECK(parse_expr("1/2*u_x1x1*v_x1x3", ctx2).max_order() == 2);
    CHECK(parse_expr("u_x1*v + u_x1", ctx2).jet_profile().size() == 2);
}

TEST_CASE("multi-index decrement guard") {
    MultiIndex j({1, 0});
    CHECK_THROWS_AS(j.decremented(Axis{2}), ContextError);
    CHECK(j.decremented(Axis{1}).is_zero());
}

TEST_CASE("property: mixed total derivatives commute") {
    ExprGen gen(testutil::ctx_u3(), 2024);
    for (int round = 0; round < 100; ++round) {
        DiffPoly f = gen.poly();
        for (int a = 1; a <= 3; ++a)
            for (int b = a + 1; b <= 3; ++b) {
                DiffPoly ab = total_derivative(total_derivative(f, Axis{a}), Axis{b});
                DiffPoly ba = total_derivative(total_derivative(f, Axis{b}), Axis{a});
                REQUIRE(ab == ba);
            }
    }
}

TEST_CASE("property: Leibniz rule") {
    ExprGen gen(testutil::ctx_u3(), 4040);
    for (int round = 0; round < 100; ++round) {
        DiffPoly f = gen.poly(), g = gen.poly();
        Axis a{gen.uniform(1, 3)};
        REQUIRE(total_derivative(f * g, a) ==
                total_derivative(f, a) * g + f * total_derivative(g, a));
    }
}

TEST_CASE("property: normal form and additive inverse") {
    ExprGen gen(testutil::ctx_u3(), 777);
    for (int round = 0; round < 100; ++round) {
        DiffPoly f = gen.poly();
        REQUIRE((f - f).is_zero());
        REQUIRE(parse_expr(print_expr(f), f.context()) == f);
    }
}

TEST_CASE("property: partial_jet / total_derivative commutation") {
    // d/du_J D_i = D_i d/du_J + d/du_{J minus e_i}, the identity behind the
    // appendix proof chain.
    ExprGen gen(testutil::ctx_u2(), 909);
    auto ctx = gen.context();
    for (int round = 0; round < 100; ++round) {
        DiffPoly f = gen.poly();
        Axis a{gen.uniform(1, 2)};
        MultiIndex j = gen.multi_index(2);
        Generator g = Generator::jet_of(Field{1}, j);
        DiffPoly lhs = partial_jet(total_derivative(f, a), g);
        DiffPoly rhs = total_derivative(partial_jet(f, g), a);
        if (j[a] > 0)
            rhs += partial_jet(f, Generator::jet_of(Field{1}, j.decremented(a)));
        REQUIRE(lhs == rhs);
    }
}
