#include "jetform/diffpoly.hpp"

#include <sstream>

namespace jetform {

std::string GaussRat::str() const {
    std::ostringstream os;
    if (im_ == 0) {
        os << re_;
    } else if (re_ == 0) {
        os << im_ << "*i";
    } else {
        os << re_ << (im_ > 0 ? "+" : "") << im_ << "*i";
    }
    return os.str();
}

void Monomial::multiply(const Generator& g, int e) {
    if (e == 0) return;
    auto it = factors_.begin();
    while (it != factors_.end() && it->first < g) ++it;
    if (it != factors_.end() && it->first == g) {
        it->second += e;
        if (it->second < 0) throw ContextError("monomial exponent below zero");
        if (it->second == 0) factors_.erase(it);
    } else {
        if (e < 0) throw ContextError("monomial exponent below zero");
        factors_.insert(it, {g, e});
    }
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da <=> db;
    auto ia = a.factors_.begin(), ib = b.factors_.begin();
    while (ia != a.factors_.end() && ib != b.factors_.end()) {
        if (!(ia->first == ib->first)) {
            // The monomial owning the earlier generator has a positive
            // exponent where the other has zero: it sorts first.
            return ia->first < ib->first ? std::strong_ordering::less
                                         : std::strong_ordering::greater;
        }
        if (ia->second != ib->second) return ib->second <=> ia->second;
        ++ia;
        ++ib;
    }
    if (ia != a.factors_.end()) return std::strong_ordering::less;
    if (ib != b.factors_.end()) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

DiffPoly DiffPoly::constant(ContextPtr ctx, const GaussRat& c) {
    DiffPoly f(std::move(ctx));
    f.add_term(Monomial(), c);
    return f;
}

DiffPoly DiffPoly::jet(const ContextPtr& ctx, Field f, const MultiIndex& j) {
    if (f.index < 1 || f.index > ctx->num_fields())
        throw ContextError("jet field out of range");
    if (j.num_axes() != ctx->num_axes())
        throw ContextError("multi-index does not match context axes");
    DiffPoly p(ctx);
    p.add_term(Monomial().times(Generator::jet_of(f, j), 1), GaussRat(1));
    return p;
}

DiffPoly DiffPoly::field_var(const ContextPtr& ctx, Field f) {
    return jet(ctx, f, MultiIndex(ctx->num_axes()));
}

DiffPoly DiffPoly::coord(const ContextPtr& ctx, Axis a) {
    if (a.index < 1 || a.index > ctx->num_axes()) throw ContextError("axis out of range");
    DiffPoly p(ctx);
    p.add_term(Monomial().times(Generator::coord(a), 1), GaussRat(1));
    return p;
}

DiffPoly DiffPoly::sin_of(const ContextPtr& ctx, Field f) {
    if (!ctx->has_trig(f))
        throw ContextError("field '" + ctx->field_name(f) + "' has no trig generators");
    DiffPoly p(ctx);
    p.add_term(Monomial().times(Generator::sin_of(f), 1), GaussRat(1));
    return p;
}

DiffPoly DiffPoly::cos_of(const ContextPtr& ctx, Field f) {
    if (!ctx->has_trig(f))
        throw ContextError("field '" + ctx->field_name(f) + "' has no trig generators");
    DiffPoly p(ctx);
    p.add_term(Monomial().times(Generator::cos_of(f), 1), GaussRat(1));
    return p;
}

DiffPoly DiffPoly::from_monomial(ContextPtr ctx, const Monomial& m, const GaussRat& c) {
    DiffPoly p(std::move(ctx));
    p.add_term(m, c);
    return p;
}

void DiffPoly::add_term(const Monomial& m, const GaussRat& c) {
    if (c.is_zero()) return;
    // Trig reduction: cos^e with e >= 2 rewrites via cos^2 = 1 - sin^2.
    for (auto& [g, e] : m.factors()) {
        if (g.kind == GenKind::Cos && e >= 2) {
            Monomial rest = m.times(g, -e);
            Generator s = Generator::sin_of(g.field());
            int halves = e / 2, parity = e % 2;
            Monomial base = parity ? rest.times(g, 1) : rest;
            // (1 - sin^2)^halves expanded binomially.
            mpz_class binom = 1;
            for (int k = 0; k <= halves; ++k) {
                GaussRat coeff = c * GaussRat(mpq_class(binom));
                if (k % 2) coeff = -coeff;
                add_term(base.times(s, 2 * k), coeff);
                binom = binom * (halves - k) / (k + 1);
            }
            return;
        }
    }
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly f(ctx_);
    for (auto& [m, c] : terms_) f.terms_.emplace(m, -c);
    return f;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
    require_same_context(ctx_, o.ctx_);
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
    require_same_context(ctx_, o.ctx_);
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    require_same_context(a.ctx_, b.ctx_);
    DiffPoly f(a.ctx_);
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) f.add_term(ma * mb, ca * cb);
    return f;
}

DiffPoly DiffPoly::scaled(const GaussRat& c) const {
    DiffPoly f(ctx_);
    if (c.is_zero()) return f;
    for (auto& [m, k] : terms_) f.terms_.emplace(m, k * c);
    return f;
}

DiffPoly DiffPoly::pow(int e) const {
    if (e < 0) throw ContextError("negative polynomial power");
    DiffPoly r = one(ctx_);
    DiffPoly base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

DiffPoly DiffPoly::substitute_jet(const Generator& g, const DiffPoly& replacement) const {
    require_same_context(ctx_, replacement.ctx_);
    DiffPoly out(ctx_);
    for (auto& [m, c] : terms_) {
        int e = m.exponent(g);
        if (e == 0) {
            out.add_term(m, c);
            continue;
        }
        DiffPoly piece = from_monomial(ctx_, m.times(g, -e), c) * replacement.pow(e);
        out += piece;
    }
    return out;
}

int DiffPoly::max_order() const {
    int n = 0;
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors())
            if (g.is_jet()) n = std::max(n, g.jet.order());
    return n;
}

std::set<JetCoordinate> DiffPoly::jet_profile() const {
    std::set<JetCoordinate> s;
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors())
            if (g.is_jet()) s.insert(JetCoordinate{g.field(), g.jet});
    return s;
}

std::set<MultiIndex> DiffPoly::jet_profile(Field f) const {
    std::set<MultiIndex> s;
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors())
            if (g.is_jet() && g.field() == f) s.insert(g.jet);
    return s;
}

bool DiffPoly::has_trig(Field f) const {
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors())
            if ((g.kind == GenKind::Sin || g.kind == GenKind::Cos) && g.field() == f)
                return true;
    return false;
}

int DiffPoly::coord_degree(Axis a) const {
    int n = 0;
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors())
            if (g.kind == GenKind::Coord && g.axis() == a) n = std::max(n, e);
    return n;
}

int DiffPoly::jet_degree() const {
    int n = 0;
    for (auto& [m, c] : terms_) {
        int d = 0;
        for (auto& [g, e] : m.factors())
            if (g.kind != GenKind::Coord) d += e;
        n = std::max(n, d);
    }
    return n;
}

bool DiffPoly::depends_on_axis(Axis a) const {
    for (auto& [m, c] : terms_)
        for (auto& [g, e] : m.factors()) {
            if (g.is_jet() && g.jet[a] > 0) return true;
            if (g.kind == GenKind::Coord && g.axis() == a) return true;
        }
    return false;
}

DiffPoly total_derivative(const DiffPoly& f, Axis a) {
    const ContextPtr& ctx = f.context();
    if (!ctx || a.index < 1 || a.index > ctx->num_axes())
        throw ContextError("axis out of range for total derivative");
    DiffPoly out(ctx);
    for (auto& [m, c] : f.terms()) {
        for (auto& [g, e] : m.factors()) {
            switch (g.kind) {
            case GenKind::Jet: {
                Monomial d = m.times(g, -1).times(Generator::jet_of(g.field(), g.jet.incremented(a)), 1);
                out.add_term(d, c * GaussRat(e));
                break;
            }
            case GenKind::Sin: {
                Monomial d = m.times(g, -1)
                                 .times(Generator::cos_of(g.field()), 1)
                                 .times(Generator::jet_of(g.field(), MultiIndex::unit(ctx->num_axes(), a)), 1);
                out.add_term(d, c * GaussRat(e));
                break;
            }
            case GenKind::Cos: {
                Monomial d = m.times(g, -1)
                                 .times(Generator::sin_of(g.field()), 1)
                                 .times(Generator::jet_of(g.field(), MultiIndex::unit(ctx->num_axes(), a)), 1);
                out.add_term(d, -(c * GaussRat(e)));
                break;
            }
            case GenKind::Coord: {
                if (g.axis() == a) out.add_term(m.times(g, -1), c * GaussRat(e));
                break;
            }
            }
        }
    }
    return out;
}

DiffPoly total_derivative(const DiffPoly& f, const MultiIndex& j) {
    DiffPoly out = f;
    for (int axis = 1; axis <= j.num_axes(); ++axis)
        for (int k = 0; k < j[Axis{axis}]; ++k) out = total_derivative(out, Axis{axis});
    return out;
}

std::set<MultiIndex> partial_targets(const DiffPoly& f, Field field) {
    std::set<MultiIndex> js = f.jet_profile(field);
    if (f.context()->has_trig(field) && f.has_trig(field))
        js.insert(MultiIndex(f.context()->num_axes()));
    return js;
}

DiffPoly partial_jet(const DiffPoly& f, const Generator& g) {
    const ContextPtr& ctx = f.context();
    DiffPoly out(ctx);
    bool zeroth_jet = g.is_jet() && g.jet.is_zero();
    for (auto& [m, c] : f.terms()) {
        int e = m.exponent(g);
        if (e > 0) out.add_term(m.times(g, -1), c * GaussRat(e));
        if (zeroth_jet && ctx->has_trig(g.field())) {
            Generator s = Generator::sin_of(g.field());
            Generator co = Generator::cos_of(g.field());
            int es = m.exponent(s);
            if (es > 0) out.add_term(m.times(s, -1).times(co, 1), c * GaussRat(es));
            int ec = m.exponent(co);
            if (ec > 0) out.add_term(m.times(co, -1).times(s, 1), -(c * GaussRat(ec)));
        }
    }
    return out;
}

} // namespace jetform
