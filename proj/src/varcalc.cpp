#include "jetform/varcalc.hpp"

#include "jetform/divergence.hpp"

namespace jetform {

namespace {

void check_axes(const ContextPtr& ctx, const std::vector<Axis>& axes) {
    if (axes.empty()) throw ContextError("axis set must be nonempty");
    for (Axis a : axes)
        if (a.index < 1 || a.index > ctx->num_axes())
            throw ContextError("axis x" + std::to_string(a.index) + " is not declared");
}

} // namespace

Characteristic::Characteristic(ContextPtr ctx, std::vector<DiffPoly> components)
    : ctx_(std::move(ctx)), comps_(std::move(components)) {
    if (static_cast<int>(comps_.size()) != ctx_->num_fields())
        throw ContextError("characteristic needs one component per field");
    for (const DiffPoly& c : comps_) require_same_context(ctx_, c.context());
}

Characteristic Characteristic::zero(const ContextPtr& ctx) {
    std::vector<DiffPoly> comps(static_cast<size_t>(ctx->num_fields()), DiffPoly::zero(ctx));
    return Characteristic(ctx, std::move(comps));
}

Characteristic Characteristic::operator+(const Characteristic& o) const {
    require_same_context(ctx_, o.ctx_);
    std::vector<DiffPoly> comps;
    for (size_t k = 0; k < comps_.size(); ++k) comps.push_back(comps_[k] + o.comps_[k]);
    return Characteristic(ctx_, std::move(comps));
}

Characteristic Characteristic::operator-() const {
    std::vector<DiffPoly> comps;
    for (const DiffPoly& c : comps_) comps.push_back(-c);
    return Characteristic(ctx_, std::move(comps));
}

DiffPoly VectorDensity::component(Axis a) const {
    auto it = comps_.find(a.index);
    return it == comps_.end() ? DiffPoly::zero(ctx_) : it->second;
}

void VectorDensity::set_component(Axis a, DiffPoly p) {
    require_same_context(ctx_, p.context());
    if (p.is_zero())
        comps_.erase(a.index);
    else
        comps_[a.index] = std::move(p);
}

void VectorDensity::add_component(Axis a, const DiffPoly& p) {
    set_component(a, component(a) + p);
}

bool VectorDensity::is_zero() const {
    for (auto& [i, p] : comps_)
        if (!p.is_zero()) return false;
    return true;
}

VectorDensity VectorDensity::operator+(const VectorDensity& o) const {
    VectorDensity r = *this;
    for (auto& [i, p] : o.comps_) r.add_component(Axis{i}, p);
    return r;
}

VectorDensity VectorDensity::operator-(const VectorDensity& o) const {
    VectorDensity r = *this;
    for (auto& [i, p] : o.comps_) r.add_component(Axis{i}, -p);
    return r;
}

DiffPoly divergence(const VectorDensity& p) {
    DiffPoly out(p.context());
    for (auto& [i, comp] : p.components()) out += total_derivative(comp, Axis{i});
    return out;
}

DiffPoly euler(const DiffPoly& lagrangian, Field field, const std::vector<Axis>& axes) {
    const ContextPtr& ctx = lagrangian.context();
    check_axes(ctx, axes);
    DiffPoly out(ctx);
    for (const MultiIndex& j : partial_targets(lagrangian, field)) {
        if (!j.supported_on(axes)) continue;
        DiffPoly w = partial_jet(lagrangian, Generator::jet_of(field, j));
        if (w.is_zero()) continue;
        DiffPoly term = total_derivative(w, j);
        if (j.order() % 2)
            out -= term;
        else
            out += term;
    }
    return out;
}

DiffPoly variational_derivative(const DiffPoly& lagrangian, Field field,
                                const std::vector<int>& index, const std::vector<Axis>& axes) {
    const ContextPtr& ctx = lagrangian.context();
    check_axes(ctx, axes);
    if (static_cast<int>(index.size()) != ctx->num_axes())
        throw ContextError("variational-derivative index does not match context axes");
    for (int c : index)
        if (c < 0) return DiffPoly::zero(ctx);
    MultiIndex i(index);
    DiffPoly out(ctx);
    for (const MultiIndex& k : partial_targets(lagrangian, field)) {
        if (!k.dominates(i)) continue;
        MultiIndex j = k.minus(i);
        if (!j.supported_on(axes)) continue;
        DiffPoly w = partial_jet(lagrangian, Generator::jet_of(field, k));
        if (w.is_zero()) continue;
        DiffPoly term = total_derivative(w, j);
        if (j.order() % 2)
            out -= term;
        else
            out += term;
    }
    return out;
}

DiffPoly prolong_apply(const Characteristic& q, const DiffPoly& f) {
    require_same_context(q.context(), f.context());
    const ContextPtr& ctx = f.context();
    DiffPoly out(ctx);
    for (Field field : ctx->all_fields()) {
        const DiffPoly& comp = q.component(field);
        if (comp.is_zero()) continue;
        for (const MultiIndex& j : partial_targets(f, field)) {
            DiffPoly w = partial_jet(f, Generator::jet_of(field, j));
            if (w.is_zero()) continue;
            out += total_derivative(comp, j) * w;
        }
    }
    return out;
}

Characteristic evolutionary_representative(const GeneralizedVectorField& v) {
    const ContextPtr& ctx = v.ctx;
    if (static_cast<int>(v.xi.size()) != ctx->num_axes() ||
        static_cast<int>(v.phi.size()) != ctx->num_fields())
        throw ContextError("vector field components do not match context");
    std::vector<DiffPoly> comps;
    for (Field field : ctx->all_fields()) {
        DiffPoly q = v.phi[static_cast<size_t>(field.index - 1)];
        for (Axis a : ctx->all_axes()) {
            const DiffPoly& xi = v.xi[static_cast<size_t>(a.index - 1)];
            if (xi.is_zero()) continue;
            q -= xi * DiffPoly::jet(ctx, field, MultiIndex::unit(ctx->num_axes(), a));
        }
        comps.push_back(std::move(q));
    }
    return Characteristic(ctx, std::move(comps));
}

IbpResult ibp_reduce(const Characteristic& q, const DiffPoly& lagrangian,
                     const std::vector<Axis>& axes) {
    const ContextPtr& ctx = lagrangian.context();
    require_same_context(q.context(), ctx);
    check_axes(ctx, axes);
    for (const JetCoordinate& jc : lagrangian.jet_profile())
        if (!jc.index.supported_on(axes))
            throw ContextError("ibp_reduce: Lagrangian jets must lie on the given axes");

    IbpResult r{DiffPoly::zero(ctx), VectorDensity(ctx)};
    for (Field field : ctx->all_fields()) {
        const DiffPoly& comp = q.component(field);
        if (comp.is_zero()) continue;
        for (const MultiIndex& j0 : partial_targets(lagrangian, field)) {
            DiffPoly w = partial_jet(lagrangian, Generator::jet_of(field, j0));
            if (w.is_zero()) continue;
            // Peel D_{Ji} Q . W = D_i(D_J Q . W) - D_J Q . D_i W, lowest axis
            // first, until no derivatives of Q remain.
            MultiIndex j = j0;
            while (!j.is_zero()) {
                Axis a{0};
                for (Axis cand : axes)
                    if (j[cand] > 0 && (a.index == 0 || cand.index < a.index)) a = cand;
                j = j.decremented(a);
                r.boundary.add_component(a, total_derivative(comp, j) * w);
                w = -total_derivative(w, a);
            }
            r.core += comp * w;
        }
    }
    return r;
}

SymmetryReport symmetry_check(const Characteristic& q, const DiffPoly& lagrangian,
                              const std::vector<Axis>& axes, bool want_certificate) {
    const ContextPtr& ctx = lagrangian.context();
    require_same_context(q.context(), ctx);
    check_axes(ctx, axes);
    SymmetryReport report;
    DiffPoly pr = prolong_apply(q, lagrangian);
    for (Field field : ctx->all_fields())
        if (!euler(pr, field, axes).is_zero()) return report;
    report.is_symmetry = true;
    if (want_certificate) {
        DecompositionOptions opts;
        opts.max_order_cap = lagrangian.max_order() + max_order(q) + 1;
        try {
            report.certificate = div_decompose(pr, axes, opts);
        } catch (const BasisExhaustedError&) {
            report.basis_exhausted = true;
        }
    }
    return report;
}

std::vector<DiffPoly> frechet(const std::vector<DiffPoly>& f, const Characteristic& r) {
    std::vector<DiffPoly> out;
    for (const DiffPoly& fk : f) {
        require_same_context(fk.context(), r.context());
        const ContextPtr& ctx = fk.context();
        DiffPoly acc(ctx);
        for (Field field : ctx->all_fields()) {
            for (const MultiIndex& j : partial_targets(fk, field)) {
                DiffPoly w = partial_jet(fk, Generator::jet_of(field, j));
                if (w.is_zero()) continue;
                acc += w * total_derivative(r.component(field), j);
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<DiffPoly> frechet_adjoint(const std::vector<DiffPoly>& f,
                                      const std::vector<DiffPoly>& r) {
    if (f.size() != r.size())
        throw ContextError("frechet_adjoint needs one multiplier per component");
    if (f.empty()) return {};
    const ContextPtr& ctx = f.front().context();
    std::vector<DiffPoly> out(static_cast<size_t>(ctx->num_fields()), DiffPoly::zero(ctx));
    for (size_t k = 0; k < f.size(); ++k) {
        require_same_context(f[k].context(), ctx);
        require_same_context(r[k].context(), ctx);
        for (Field field : ctx->all_fields()) {
            for (const MultiIndex& j : partial_targets(f[k], field)) {
                DiffPoly w = partial_jet(f[k], Generator::jet_of(field, j));
                if (w.is_zero()) continue;
                DiffPoly term = total_derivative(w * r[k], j);
                if (j.order() % 2)
                    out[static_cast<size_t>(field.index - 1)] -= term;
                else
                    out[static_cast<size_t>(field.index - 1)] += term;
            }
        }
    }
    return out;
}

bool helmholtz_check(const std::vector<DiffPoly>& f) {
    if (f.empty()) return true;
    const ContextPtr& ctx = f.front().context();
    if (static_cast<int>(f.size()) != ctx->num_fields())
        throw ContextError("helmholtz_check needs one component per field");
    ContextPtr wider = ctx->with_placeholder_fields(ctx->num_fields());
    std::vector<DiffPoly> lifted;
    for (const DiffPoly& fk : f) lifted.push_back(lift_to(fk, wider));
    std::vector<DiffPoly> placeholders;
    for (int k = 0; k < ctx->num_fields(); ++k)
        placeholders.push_back(DiffPoly::field_var(wider, Field{ctx->num_fields() + k + 1}));
    // frechet() differentiates with respect to every field of the wider
    // context; the lifted F has no placeholder jets, so only the original
    // fields contribute, with R_alpha = placeholder_alpha.
    std::vector<DiffPoly> r_full(static_cast<size_t>(wider->num_fields()),
                                 DiffPoly::zero(wider));
    for (int k = 0; k < ctx->num_fields(); ++k) r_full[static_cast<size_t>(k)] = placeholders[static_cast<size_t>(k)];
    Characteristic r(wider, r_full);
    std::vector<DiffPoly> d = frechet(lifted, r);
    std::vector<DiffPoly> dstar = frechet_adjoint(lifted, placeholders);
    for (int k = 0; k < ctx->num_fields(); ++k)
        if (!(d[static_cast<size_t>(k)] - dstar[static_cast<size_t>(k)]).is_zero()) return false;
    return true;
}

DiffPoly lift_to(const DiffPoly& f, const ContextPtr& wider) {
    if (!f.context()) throw ContextError("cannot lift a value without context");
    if (*f.context() == *wider) return f;
    if (!wider->extends(*f.context()))
        throw ContextError("target context does not extend the value's context");
    DiffPoly out(wider);
    for (auto& [m, c] : f.terms()) out.add_term(m, c);
    return out;
}

int max_order(const Characteristic& q) {
    int n = 0;
    for (const DiffPoly& c : q.components()) n = std::max(n, c.max_order());
    return n;
}

} // namespace jetform
