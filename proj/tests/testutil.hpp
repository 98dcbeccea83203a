#pragma once

#include "jetform/diffpoly.hpp"
#include "jetform/varcalc.hpp"

#include <random>

namespace jetform::testutil {

/// Deterministic random differential polynomials for property suites.
class ExprGen {
  public:
    ExprGen(ContextPtr ctx, uint64_t seed, int max_order = 3, int max_degree = 3)
        : ctx_(std::move(ctx)), rng_(seed), max_order_(max_order), max_degree_(max_degree) {}

    const ContextPtr& context() const { return ctx_; }

    int uniform(int lo, int hi) {  // inclusive, portable across stdlibs
        return lo + static_cast<int>(rng_() % static_cast<uint64_t>(hi - lo + 1));
    }

    GaussRat coefficient() {
        int num = uniform(-6, 6);
        if (num == 0) num = 1;
        int den = uniform(1, 4);
        GaussRat c = GaussRat::rational(num, den);
        if (uniform(0, 3) == 0) c = c * GaussRat::i();
        return c;
    }

    MultiIndex multi_index(int max_total) {
        MultiIndex j(ctx_->num_axes());
        int total = uniform(0, max_total);
        for (int k = 0; k < total; ++k)
            j = j.incremented(Axis{uniform(1, ctx_->num_axes())});
        return j;
    }

    Generator generator() {
        Field f{uniform(1, ctx_->num_fields())};
        if (ctx_->has_trig(f)) {
            int pick = uniform(0, 5);
            if (pick == 0) return Generator::sin_of(f);
            if (pick == 1) return Generator::cos_of(f);
        }
        return Generator::jet_of(f, multi_index(max_order_));
    }

    Monomial monomial() {
        Monomial m;
        int degree = uniform(1, max_degree_);
        for (int k = 0; k < degree; ++k) m.multiply(generator(), 1);
        return m;
    }

    DiffPoly poly(int max_terms = 4) {
        DiffPoly f(ctx_);
        int terms = uniform(1, max_terms);
        for (int k = 0; k < terms; ++k) f.add_term(monomial(), coefficient());
        return f;
    }

    Characteristic characteristic() {
        std::vector<DiffPoly> comps;
        for (int k = 0; k < ctx_->num_fields(); ++k) comps.push_back(poly(3));
        return Characteristic(ctx_, std::move(comps));
    }

  private:
    ContextPtr ctx_;
    std::mt19937_64 rng_;
    int max_order_;
    int max_degree_;
};

inline ContextPtr ctx_u2() { return Context::make(2, {"u"}, {"u"}); }
inline ContextPtr ctx_u3() { return Context::make(3, {"u"}, {"u"}); }
inline ContextPtr ctx_uv3() { return Context::make(3, {"u", "v"}); }

} // namespace jetform::testutil
