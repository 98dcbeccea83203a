#pragma once

#include "jetform/coefficient.hpp"
#include "jetform/context.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace jetform {

enum class GenKind : uint8_t { Coord = 0, Sin = 1, Cos = 2, Jet = 3 };

/// A single symbol of the jet algebra: an explicit coordinate x_i, a trig
/// generator sin(u)/cos(u) of a zeroth jet, or a jet u^alpha_J.
struct Generator {
    GenKind kind = GenKind::Jet;
    int id = 0;      // axis index for Coord, field index otherwise
    MultiIndex jet;  // populated for Jet only

    static Generator coord(Axis a) { return {GenKind::Coord, a.index, MultiIndex()}; }
    static Generator sin_of(Field f) { return {GenKind::Sin, f.index, MultiIndex()}; }
    static Generator cos_of(Field f) { return {GenKind::Cos, f.index, MultiIndex()}; }
    static Generator jet_of(Field f, MultiIndex j) { return {GenKind::Jet, f.index, std::move(j)}; }

    bool is_jet() const { return kind == GenKind::Jet; }
    Field field() const { return Field{id}; }
    Axis axis() const { return Axis{id}; }

    friend bool operator==(const Generator& a, const Generator& b) {
        return a.kind == b.kind && a.id == b.id && a.jet == b.jet;
    }
    /// Generator order: Coord < Sin < Cos < Jet, then id, then jet-lex index.
    friend std::strong_ordering operator<=>(const Generator& a, const Generator& b) {
        if (a.kind != b.kind) return a.kind <=> b.kind;
        if (a.id != b.id) return a.id <=> b.id;
        return a.jet <=> b.jet;
    }
};

/// A jet coordinate u^alpha_J, as reported by jet_profile.
struct JetCoordinate {
    Field field;
    MultiIndex index;
    friend bool operator==(const JetCoordinate&, const JetCoordinate&) = default;
    friend std::strong_ordering operator<=>(const JetCoordinate& a, const JetCoordinate& b) {
        if (a.field != b.field) return a.field <=> b.field;
        return a.index <=> b.index;
    }
};

/// Product of generator powers, kept sorted by generator order.
class Monomial {
  public:
    Monomial() = default;

    const std::vector<std::pair<Generator, int>>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [g, e] : factors_) d += e;
        return d;
    }

    int exponent(const Generator& g) const {
        for (auto& [h, e] : factors_)
            if (h == g) return e;
        return 0;
    }

    /// Multiply in g^e (e may be negative to divide; removing below zero throws).
    void multiply(const Generator& g, int e);
    Monomial times(const Generator& g, int e) const {
        Monomial m = *this;
        m.multiply(g, e);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m = a;
        for (auto& [g, e] : b.factors_) m.multiply(g, e);
        return m;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }

    /// Graded lexicographic order: by total degree, then along the generator
    /// sequence where a higher exponent on an earlier generator sorts first.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

  private:
    std::vector<std::pair<Generator, int>> factors_;
};

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return a < b; }
};

/// Exact multivariate differential polynomial in normal form: a map from
/// monomials to nonzero Gaussian-rational coefficients, trig-reduced so that
/// no cos power exceeds 1 (cos^2 = 1 - sin^2).
class DiffPoly {
  public:
    using TermMap = std::map<Monomial, GaussRat, MonomialLess>;

    DiffPoly() = default;
    explicit DiffPoly(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static DiffPoly zero(ContextPtr ctx) { return DiffPoly(std::move(ctx)); }
    static DiffPoly constant(ContextPtr ctx, const GaussRat& c);
    static DiffPoly one(ContextPtr ctx) { return constant(std::move(ctx), GaussRat(1)); }
    static DiffPoly jet(const ContextPtr& ctx, Field f, const MultiIndex& j);
    static DiffPoly field_var(const ContextPtr& ctx, Field f);
    static DiffPoly coord(const ContextPtr& ctx, Axis a);
    static DiffPoly sin_of(const ContextPtr& ctx, Field f);
    static DiffPoly cos_of(const ContextPtr& ctx, Field f);
    static DiffPoly from_monomial(ContextPtr ctx, const Monomial& m, const GaussRat& c);

    const ContextPtr& context() const { return ctx_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    /// Adds c*m, applying trig reduction; the workhorse behind all ring ops.
    void add_term(const Monomial& m, const GaussRat& c);

    DiffPoly operator-() const;
    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }
    DiffPoly scaled(const GaussRat& c) const;
    DiffPoly pow(int e) const;

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        return a.terms_ == b.terms_;
    }

    /// Replace every occurrence of a jet generator by a polynomial.
    DiffPoly substitute_jet(const Generator& g, const DiffPoly& replacement) const;

    int max_order() const;
    std::set<JetCoordinate> jet_profile() const;
    std::set<MultiIndex> jet_profile(Field f) const;
    bool has_trig(Field f) const;
    /// Highest power of the coordinate generator x_a.
    int coord_degree(Axis a) const;
    /// Max total degree in jet+trig generators over the monomials.
    int jet_degree() const;
    bool depends_on_axis(Axis a) const; // any jet count or coord on a

    std::string str() const; // canonical rendering, defined in textio

  private:
    ContextPtr ctx_;
    TermMap terms_;
};

/// Total derivative D_{x_i}: d/dx_i plus the chain rule over all jets, with
/// D_i sin(u) = cos(u) u_{x_i} and D_i x_j = delta_ij.
DiffPoly total_derivative(const DiffPoly& f, Axis a);
/// D_J as the composition of axis derivatives.
DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& j);

/// Formal partial derivative with respect to one generator, treating
/// generators as independent symbols except that d(sin u)/du = cos u and
/// d(cos u)/du = -sin u when g is the zeroth jet of a trig field.
DiffPoly partial_jet(const DiffPoly& f, const Generator& g);

/// Jet multi-indices of f for the field, plus the zeroth jet whenever trig
/// generators of the field appear (partial_jet sees through those).
std::set<MultiIndex> partial_targets(const DiffPoly& f, Field field);

} // namespace jetform
