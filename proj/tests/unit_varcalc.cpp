#include "jetform/divergence.hpp"
#include "jetform/textio.hpp"
#include "testutil.hpp"

#include <doctest.h>

using namespace jetform;
using testutil::ExprGen;

namespace {

DiffPoly p(const char* src, const ContextPtr& ctx) { return parse_expr(src, ctx); }

Characteristic single(const ContextPtr& ctx, const char* src) {
    return Characteristic(ctx, {parse_expr(src, ctx)});
}

} // namespace

TEST_CASE("euler operator") {
    auto ctx = testutil::ctx_u3();
    CHECK(euler(p("1/2*u_x1*u_x2 - cos(u)", ctx), Field{1}, {Axis{1}, Axis{2}}) ==
          p("sin(u) - u_x1x2", ctx));
    CHECK(euler(p("1/2*u_x1^2", ctx), Field{1}, {Axis{1}}) == p("-u_x1x1", ctx));

    auto akns = Context::make(3, {"q", "r"});
    DiffPoly l12 = p("1/2*(r*q_x2 - q*r_x2) + i/2*q_x1*r_x1 + i/2*q^2*r^2", akns);
    CHECK(euler(l12, Field{1}, {Axis{1}, Axis{2}}) ==
          p("-r_x2 - i/2*r_x1x1 + i*r^2*q", akns));
    CHECK(euler(l12, Field{2}, {Axis{1}, Axis{2}}) ==
          p("q_x2 - i/2*q_x1x1 + i*q^2*r", akns));
}

TEST_CASE("restricted variational derivative") {
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    CHECK(variational_derivative(l, Field{1}, {0, 0, 0}, {Axis{1}, Axis{2}}) ==
          p("sin(u) - u_x1x2", ctx));
    CHECK(variational_derivative(p("1/2*u_x1*u_x2", ctx), Field{1}, {1, 0, 0}, {Axis{2}}) ==
          p("1/2*u_x2", ctx));
    CHECK(variational_derivative(l, Field{1}, {-1, 0, 0}, {Axis{1}}).is_zero());
}

TEST_CASE("prolongation") {
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    CHECK(prolong_apply(single(ctx, "u_x3"), l) == total_derivative(l, Axis{3}));
    CHECK(prolong_apply(Characteristic::zero(ctx), l).is_zero());
    // The worked mKdV symmetry: pr v_Q(L) equals the displayed divergence.
    DiffPoly pr = prolong_apply(single(ctx, "u_x1x1x1 + 1/2*u_x1^3"), l);
    DiffPoly d1 = total_derivative(
        p("1/2*u_x1*u_x1x1x2 - 1/2*u_x1x1*u_x1x2 + 1/2*u_x1x1x1*u_x2 + 1/4*u_x1^3*u_x2 "
          "+ u_x1x1*sin(u) - 1/2*u_x1^2*cos(u)",
          ctx),
        Axis{1});
    DiffPoly d2 = total_derivative(p("1/8*u_x1^4", ctx), Axis{2});
    CHECK(pr == d1 + d2);
}

TEST_CASE("evolutionary representative") {
    auto ctx = testutil::ctx_u2();
    GeneralizedVectorField v;
    v.ctx = ctx;
    v.xi = {DiffPoly::one(ctx), DiffPoly::zero(ctx)};
    v.phi = {DiffPoly::zero(ctx)};
    CHECK(evolutionary_representative(v).component(Field{1}) == p("-u_x1", ctx));

    GeneralizedVectorField rot;
    rot.ctx = ctx;
    rot.xi = {p("x2", ctx), p("-x1", ctx)};
    rot.phi = {DiffPoly::zero(ctx)};
    CHECK(evolutionary_representative(rot).component(Field{1}) ==
          p("-x2*u_x1 + x1*u_x2", ctx));

    GeneralizedVectorField evol;
    evol.ctx = ctx;
    evol.xi = {DiffPoly::zero(ctx), DiffPoly::zero(ctx)};
    evol.phi = {p("u*u_x1", ctx)};
    CHECK(evolutionary_representative(evol).component(Field{1}) == p("u*u_x1", ctx));
}

TEST_CASE("ibp_reduce worked cases") {
    auto ctx = Context::make(3, {"u", "w"});
    Characteristic q(ctx, {p("w", ctx), DiffPoly::zero(ctx)});
    SUBCASE("one integration by parts") {
        DiffPoly l = p("1/2*u_x1^2", ctx);
        IbpResult r = ibp_reduce(q, l, {Axis{1}});
        CHECK(r.core == p("-w*u_x1x1", ctx));
        CHECK(r.boundary.component(Axis{1}) == p("w*u_x1", ctx));
    }
    SUBCASE("mixed second derivative") {
        DiffPoly l = p("1/2*u_x1*u_x2", ctx);
        IbpResult r = ibp_reduce(q, l, {Axis{1}, Axis{2}});
        CHECK(r.core == p("-w*u_x1x2", ctx));
        CHECK(r.boundary.component(Axis{1}) == p("1/2*w*u_x2", ctx));
        CHECK(r.boundary.component(Axis{2}) == p("1/2*w*u_x1", ctx));
    }
}

TEST_CASE("ibp_reduce rejects off-axes jets") {
    auto ctx = testutil::ctx_u2();
    CHECK_THROWS_AS(ibp_reduce(single(ctx, "u"), p("u_x2^2", ctx), {Axis{1}}), ContextError);
}

TEST_CASE("symmetry_check on the worked corpus") {
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    std::vector<Axis> base{Axis{1}, Axis{2}};
    CHECK(symmetry_check(single(ctx, "u_x1x1x1 + 1/2*u_x1^3"), l, base).is_symmetry);
    SymmetryReport zero = symmetry_check(Characteristic::zero(ctx), l, base);
    CHECK(zero.is_symmetry);
    REQUIRE(zero.certificate.has_value());
    CHECK(zero.certificate->is_zero());
    CHECK_FALSE(symmetry_check(single(ctx, "u"), l, base).is_symmetry);
}

TEST_CASE("frechet and adjoint") {
    auto ctx = Context::make(2, {"u", "r"});
    DiffPoly f = p("u_x1x1", ctx);
    Characteristic r(ctx, {p("r", ctx), DiffPoly::zero(ctx)});
    CHECK(frechet({f}, r)[0] == p("r_x1x1", ctx));
    CHECK(frechet_adjoint({p("u_x1", ctx)}, {p("r", ctx)})[0] == p("-r_x1", ctx));
}

TEST_CASE("helmholtz_check") {
    auto ctx = testutil::ctx_u3();
    CHECK(helmholtz_check({p("sin(u) - u_x1x2", ctx)}));
    CHECK_FALSE(helmholtz_check({p("u_x1", ctx)}));
    ExprGen gen(testutil::ctx_u2(), 31337);
    for (int round = 0; round < 25; ++round) {
        DiffPoly l = gen.poly();
        REQUIRE(helmholtz_check({euler(l, Field{1}, l.context()->all_axes())}));
    }
}

TEST_CASE("property: Euler annihilates total derivatives") {
    ExprGen gen(testutil::ctx_u3(), 616);
    for (int round = 0; round < 100; ++round) {
        DiffPoly f = gen.poly();
        Axis a{gen.uniform(1, 3)};
        DiffPoly d = total_derivative(f, a);
        REQUIRE(euler(d, Field{1}, f.context()->all_axes()).is_zero());
    }
}

TEST_CASE("property: ibp_reduce is exact") {
    auto ctx = Context::make(2, {"u", "w"}, {"u"});
    ExprGen gen(ctx, 9090, /*max_order=*/2, /*max_degree=*/3);
    for (int round = 0; round < 100; ++round) {
        DiffPoly l = gen.poly();
        Characteristic q = gen.characteristic();
        IbpResult r = ibp_reduce(q, l, ctx->all_axes());
        DiffPoly defect = prolong_apply(q, l) - r.core - divergence(r.boundary);
        REQUIRE(defect.is_zero());
        DiffPoly qe(ctx);
        for (Field f : ctx->all_fields()) qe += q.component(f) * euler(l, f, ctx->all_axes());
        REQUIRE(r.core == qe);
    }
}

TEST_CASE("property: Lemma A.2 reconstruction") {
    // dL/du_I = sum over J with j_i <= 1 on the retained axes of
    // D_J(delta L / delta u_{I+J}), the excluded axis held fixed.
    ExprGen gen(testutil::ctx_u3(), 1414);
    auto ctx = gen.context();
    for (int round = 0; round < 100; ++round) {
        DiffPoly l = gen.poly();
        int excluded = gen.uniform(1, 3);
        std::vector<Axis> axes;
        for (int a = 1; a <= 3; ++a)
            if (a != excluded) axes.push_back(Axis{a});
        MultiIndex i = gen.multi_index(3);
        DiffPoly lhs = partial_jet(l, Generator::jet_of(Field{1}, i));
        DiffPoly rhs(ctx);
        for (int b0 : {0, 1})
            for (int b1 : {0, 1}) {
                MultiIndex j(3);
                if (b0) j = j.incremented(axes[0]);
                if (b1) j = j.incremented(axes[1]);
                std::vector<int> shifted = i.plus(j).counts();
                rhs += total_derivative(variational_derivative(l, Field{1}, shifted, axes), j);
            }
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("property: adjoint identity E(P.Q) = D_P*(Q) + D_Q*(P)") {
    auto ctx = Context::make(2, {"u", "w"});
    ExprGen gen(ctx, 2718, /*max_order=*/2, /*max_degree=*/2);
    for (int round = 0; round < 60; ++round) {
        std::vector<DiffPoly> pvec{gen.poly(), gen.poly()};
        std::vector<DiffPoly> qvec{gen.poly(), gen.poly()};
        DiffPoly dot = pvec[0] * qvec[0] + pvec[1] * qvec[1];
        auto dp = frechet_adjoint(pvec, qvec);
        auto dq = frechet_adjoint(qvec, pvec);
        for (Field f : ctx->all_fields()) {
            DiffPoly lhs = euler(dot, f, ctx->all_axes());
            size_t k = static_cast<size_t>(f.index - 1);
            REQUIRE(lhs == dp[k] + dq[k]);
        }
    }
}

TEST_CASE("property: Noether equivalence on symmetric pairs") {
    // For a symmetry characteristic, Q.E(L) has zero Euler image.
    auto ctx = testutil::ctx_u3();
    DiffPoly l = p("1/2*u_x1*u_x2 - cos(u)", ctx);
    for (const char* qsrc : {"u_x1", "u_x2", "u_x1x1x1 + 1/2*u_x1^3"}) {
        Characteristic q = single(ctx, qsrc);
        DiffPoly qe(ctx);
        for (Field f : ctx->all_fields())
            qe += q.component(f) * euler(l, f, {Axis{1}, Axis{2}});
        REQUIRE(symmetry_check(q, l, {Axis{1}, Axis{2}}, false).is_symmetry);
        REQUIRE(euler(qe, Field{1}, ctx->all_axes()).is_zero());
    }
}
