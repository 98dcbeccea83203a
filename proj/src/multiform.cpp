#include "jetform/multiform.hpp"

#include <algorithm>
#include <functional>

namespace jetform {

namespace {

std::vector<Axis> to_axes(const std::vector<int>& ids) {
    std::vector<Axis> v;
    for (int i : ids) v.push_back(Axis{i});
    return v;
}

// All multi-indices over the given axes with total order <= bound.
std::vector<MultiIndex> indices_up_to(const ContextPtr& ctx, const std::vector<int>& axes,
                                      int bound) {
    std::vector<MultiIndex> out;
    MultiIndex current(ctx->num_axes());
    std::function<void(size_t, int)> rec = [&](size_t pos, int left) {
        if (pos == axes.size()) {
            out.push_back(current);
            return;
        }
        for (int c = 0; c <= left; ++c) {
            MultiIndex saved = current;
            current = current.incremented(Axis{axes[pos]}, c);
            rec(pos + 1, left - c);
            current = saved;
        }
    };
    rec(0, bound);
    std::sort(out.begin(), out.end());
    return out;
}

// Increasing m-subsets of the frame.
std::vector<std::vector<int>> increasing_tuples(const std::vector<int>& frame, int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (static_cast<int>(current.size()) == m) {
            out.push_back(current);
            return;
        }
        for (size_t k = start; k < frame.size(); ++k) {
            current.push_back(frame[k]);
            rec(k + 1);
            current.pop_back();
        }
    };
    rec(0);
    return out;
}

} // namespace

int sort_tuple_sign(std::vector<int>& tuple) {
    int sign = 1;
    for (size_t i = 0; i + 1 < tuple.size(); ++i)
        for (size_t j = 0; j + 1 < tuple.size() - i; ++j)
            if (tuple[j] > tuple[j + 1]) {
                std::swap(tuple[j], tuple[j + 1]);
                sign = -sign;
            }
    for (size_t i = 0; i + 1 < tuple.size(); ++i)
        if (tuple[i] == tuple[i + 1]) return 0;
    return sign;
}

KForm::KForm(ContextPtr ctx, int degree, std::vector<int> frame)
    : ctx_(std::move(ctx)), degree_(degree), frame_(std::move(frame)) {
    if (degree_ < 1) throw ContextError("form degree must be at least 1");
    if (frame_.empty())
        for (int a = 1; a <= ctx_->num_axes(); ++a) frame_.push_back(a);
    std::sort(frame_.begin(), frame_.end());
    for (int a : frame_)
        if (a < 1 || a > ctx_->num_axes()) throw ContextError("frame axis out of range");
    // degree may exceed the frame dimension; such forms are identically zero
    // (no valid tuples), which keeps d of a top form well defined.
}

void KForm::set_coefficient(const std::vector<int>& tuple, const DiffPoly& value) {
    require_same_context(ctx_, value.context());
    if (static_cast<int>(tuple.size()) != degree_)
        throw ContextError("coefficient tuple length must equal the form degree");
    std::vector<int> sorted = tuple;
    int sign = sort_tuple_sign(sorted);
    if (sign == 0) throw ContextError("coefficient tuple has a repeated axis");
    for (int a : sorted)
        if (std::find(frame_.begin(), frame_.end(), a) == frame_.end())
            throw ContextError("coefficient axis x" + std::to_string(a) + " outside the frame");
    DiffPoly v = sign > 0 ? value : -value;
    if (v.is_zero())
        coeffs_.erase(sorted);
    else
        coeffs_[sorted] = std::move(v);
}

void KForm::add_coefficient(const std::vector<int>& tuple, const DiffPoly& value) {
    set_coefficient(tuple, coefficient(tuple) + value);
}

DiffPoly KForm::coefficient(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != degree_)
        throw ContextError("coefficient tuple length must equal the form degree");
    std::vector<int> sorted = tuple;
    int sign = sort_tuple_sign(sorted);
    if (sign == 0) return DiffPoly::zero(ctx_);
    auto it = coeffs_.find(sorted);
    if (it == coeffs_.end()) return DiffPoly::zero(ctx_);
    return sign > 0 ? it->second : -it->second;
}

int KForm::max_order() const {
    int n = 0;
    for (auto& [t, c] : coeffs_) n = std::max(n, c.max_order());
    return n;
}

KForm exterior_derivative(const KForm& form) {
    const int k = form.degree();
    KForm out(form.context(), k + 1, form.frame());
    for (const auto& tuple : increasing_tuples(form.frame(), k + 1)) {
        DiffPoly acc(form.context());
        for (int alpha = 1; alpha <= k + 1; ++alpha) {
            // Cyclic complement (i_{alpha+1},...,i_{k+1},i_1,...,i_{alpha-1}).
            std::vector<int> cyc;
            for (int t = alpha; t < k + 1; ++t) cyc.push_back(tuple[static_cast<size_t>(t)]);
            for (int t = 0; t + 1 < alpha; ++t) cyc.push_back(tuple[static_cast<size_t>(t)]);
            DiffPoly c = form.coefficient(cyc);
            if (c.is_zero()) continue;
            DiffPoly term = total_derivative(c, Axis{tuple[static_cast<size_t>(alpha - 1)]});
            if ((k * (alpha + 1)) % 2)
                acc -= term;
            else
                acc += term;
        }
        if (!acc.is_zero()) out.set_coefficient(tuple, acc);
    }
    return out;
}

EOMSystem::EOMSystem(ContextPtr ctx, std::vector<EOMRule> rules, std::optional<int> confluence_order)
    : ctx_(std::move(ctx)), rules_(std::move(rules)) {
    int max_input_order = 0;
    for (size_t a = 0; a < rules_.size(); ++a) {
        const EOMRule& r = rules_[a];
        require_same_context(ctx_, r.rhs.context());
        if (r.lead.num_axes() != ctx_->num_axes())
            throw ContextError("rule lead does not match context axes");
        if (r.lead.is_zero()) throw ContextError("rule lead must carry at least one derivative");
        for (const MultiIndex& j : r.rhs.jet_profile(r.field))
            if (j.dominates(r.lead))
                throw ContextError("rule right-hand side contains its own lead");
        for (size_t b = 0; b < a; ++b)
            if (rules_[b].field == r.field && rules_[b].lead == r.lead)
                throw ContextError("duplicate rule lead");
        max_input_order = std::max({max_input_order, r.lead.order(), r.rhs.max_order()});
    }
    confluence_order_ = confluence_order.value_or(max_input_order + 2);
    if (confluence_order_ < 0) throw ContextError("confluence order must be non-negative");
}

const EOMRule* EOMSystem::match(Field f, const MultiIndex& j) const {
    for (const EOMRule& r : rules_)
        if (r.field == f && j.dominates(r.lead)) return &r;
    return nullptr;
}

DiffPoly EomReducer::reduced_jet(Field f, const MultiIndex& j) {
    auto key = std::make_pair(f.index, j);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        if (it->second.context() == nullptr)
            throw std::runtime_error("EOM reduction does not terminate");
        return it->second;
    }
    const EOMRule* rule = sys_->match(f, j);
    if (!rule) {
        DiffPoly self = DiffPoly::jet(sys_->context(), f, j);
        cache_.emplace(key, self);
        return self;
    }
    cache_.emplace(key, DiffPoly());  // in-progress marker
    DiffPoly value;
    // Derive incrementally from an already-reduced lower jet when possible;
    // this keeps intermediate expressions reduced instead of expanding
    // D_{J-lead}(rhs) wholesale.
    Axis step{0};
    for (int a = 1; a <= sys_->context()->num_axes() && step.index == 0; ++a)
        if (j[Axis{a}] > 0 && j.decremented(Axis{a}).dominates(rule->lead)) step = Axis{a};
    if (step.index != 0)
        value = reduce(total_derivative(reduced_jet(f, j.decremented(step)), step));
    else
        value = reduce(total_derivative(rule->rhs, j.minus(rule->lead)));
    cache_[key] = value;
    return value;
}

DiffPoly EomReducer::reduce(const DiffPoly& f) {
    const ContextPtr& ctx = sys_->context();
    require_same_context(ctx, f.context());
    DiffPoly out(ctx);
    for (auto& [m, c] : f.terms()) {
        DiffPoly piece = DiffPoly::constant(ctx, c);
        for (auto& [g, e] : m.factors()) {
            if (g.is_jet() && sys_->match(g.field(), g.jet)) {
                piece = piece * reduced_jet(g.field(), g.jet).pow(e);
            } else {
                piece = piece * DiffPoly::from_monomial(ctx, Monomial().times(g, e), GaussRat(1));
            }
        }
        out += piece;
    }
    return out;
}

DiffPoly EomReducer::reduce_jet_via(Field f, const MultiIndex& j, const EOMRule& rule) {
    if (!(rule.field == f) || !j.dominates(rule.lead))
        throw ContextError("rule does not apply to the given jet");
    return reduce(total_derivative(rule.rhs, j.minus(rule.lead)));
}

DiffPoly reduce_mod_eom(const DiffPoly& f, const EOMSystem& sys) {
    EomReducer reducer(sys);
    return reducer.reduce(f);
}

bool commuting_check(const EOMSystem& sys) {
    const ContextPtr& ctx = sys.context();
    EomReducer reducer(sys);
    std::vector<int> all_axes;
    for (int a = 1; a <= ctx->num_axes(); ++a) all_axes.push_back(a);
    const auto pads = indices_up_to(ctx, all_axes, sys.confluence_order());
    for (size_t a = 0; a < sys.rules().size(); ++a) {
        for (size_t b = a + 1; b < sys.rules().size(); ++b) {
            const EOMRule& ra = sys.rules()[a];
            const EOMRule& rb = sys.rules()[b];
            if (!(ra.field == rb.field)) continue;
            MultiIndex lub = MultiIndex::lub(ra.lead, rb.lead);
            for (const MultiIndex& pad : pads) {
                MultiIndex j = lub.plus(pad);
                DiffPoly via_a = reducer.reduce_jet_via(ra.field, j, ra);
                DiffPoly via_b = reducer.reduce_jet_via(rb.field, j, rb);
                if (!(via_a == via_b)) return false;
            }
        }
    }
    return true;
}

ClosureReport closure_check(const KForm& form, const EOMSystem& sys) {
    ClosureReport report;
    report.closed = true;
    report.double_zero = true;
    KForm dl = exterior_derivative(form);
    EomReducer reducer(sys);
    for (auto& [tuple, coeff] : dl.coefficients()) {
        DiffPoly r = reducer.reduce(coeff);
        if (!r.is_zero()) {
            report.closed = false;
            report.double_zero = false;
            report.residuals.emplace_back(tuple, r);
            continue;
        }
        for (Field field : form.context()->all_fields()) {
            for (const MultiIndex& j : partial_targets(coeff, field)) {
                DiffPoly p = partial_jet(coeff, Generator::jet_of(field, j));
                if (p.is_zero()) continue;
                DiffPoly rp = reducer.reduce(p);
                if (!rp.is_zero()) {
                    report.double_zero = false;
                    report.residuals.emplace_back(tuple, rp);
                }
            }
        }
    }
    return report;
}

std::vector<ELEntry> multiform_el_equations(const KForm& form) {
    const ContextPtr& ctx = form.context();
    const int k = form.degree();
    const int bound = form.max_order() + 1;
    std::vector<ELEntry> out;
    for (const auto& tuple : increasing_tuples(form.frame(), k + 1)) {
        for (Field field : ctx->all_fields()) {
            for (const MultiIndex& i : indices_up_to(ctx, form.frame(), bound)) {
                DiffPoly expr(ctx);
                for (int alpha = 1; alpha <= k + 1; ++alpha) {
                    int excluded = tuple[static_cast<size_t>(alpha - 1)];
                    if (i[Axis{excluded}] == 0) continue;  // negative shift: zero term
                    std::vector<int> cyc;
                    for (int t = alpha; t < k + 1; ++t) cyc.push_back(tuple[static_cast<size_t>(t)]);
                    for (int t = 0; t + 1 < alpha; ++t) cyc.push_back(tuple[static_cast<size_t>(t)]);
                    DiffPoly lbar = form.coefficient(cyc);
                    if (lbar.is_zero()) continue;
                    std::vector<int> shifted = i.counts();
                    shifted[static_cast<size_t>(excluded - 1)] -= 1;
                    std::vector<Axis> var_axes;
                    for (int t : tuple)
                        if (t != excluded) var_axes.push_back(Axis{t});
                    DiffPoly term = variational_derivative(lbar, field, shifted, var_axes);
                    if ((alpha * k) % 2)
                        expr -= term;
                    else
                        expr += term;
                }
                out.push_back(ELEntry{tuple, field, i.counts(), std::move(expr)});
            }
        }
    }
    return out;
}

std::vector<ELEntry> multiform_el_direct(const KForm& form) {
    const ContextPtr& ctx = form.context();
    const int bound = form.max_order() + 1;
    KForm dl = exterior_derivative(form);
    std::vector<ELEntry> out;
    for (const auto& tuple : increasing_tuples(form.frame(), form.degree() + 1)) {
        DiffPoly a = dl.coefficient(tuple);
        for (Field field : ctx->all_fields())
            for (const MultiIndex& i : indices_up_to(ctx, form.frame(), bound))
                out.push_back(ELEntry{tuple, field, i.counts(),
                                      partial_jet(a, Generator::jet_of(field, i))});
    }
    return out;
}

BuildResult build_multiform(const DiffPoly& lagrangian, const Characteristic& q, Axis new_axis,
                            std::vector<Axis> base_axes, const DecompositionOptions& options) {
    const ContextPtr& ctx = lagrangian.context();
    require_same_context(ctx, q.context());
    if (new_axis.index < 1 || new_axis.index > ctx->num_axes())
        throw ContextError("new axis is not declared in the context");

    if (base_axes.empty()) {
        for (Axis a : ctx->all_axes()) {
            bool used = lagrangian.depends_on_axis(a);
            for (const DiffPoly& c : q.components()) used = used || c.depends_on_axis(a);
            if (used) base_axes.push_back(a);
        }
    }
    std::sort(base_axes.begin(), base_axes.end());
    if (base_axes.empty()) throw ContextError("cannot determine base axes for the construction");
    for (Axis a : base_axes)
        if (a == new_axis)
            throw ContextError("the new axis must not appear among the base axes");
    if (lagrangian.depends_on_axis(new_axis))
        throw ContextError("the Lagrangian must not depend on the new axis");
    for (const DiffPoly& c : q.components())
        if (c.depends_on_axis(new_axis))
            throw ContextError("the characteristic must not depend on the new axis");

    SymmetryReport sym = symmetry_check(q, lagrangian, base_axes, /*want_certificate=*/false);
    if (!sym.is_symmetry)
        throw SymmetryError("the characteristic is not a variational symmetry of the Lagrangian");

    // u_{x_new} . E(L) = D_new(L) - Div(bw): the new-axis slot of P is L itself.
    std::vector<DiffPoly> w_comps;
    for (Field f : ctx->all_fields())
        w_comps.push_back(DiffPoly::jet(ctx, f, MultiIndex::unit(ctx->num_axes(), new_axis)));
    Characteristic w(ctx, std::move(w_comps));
    IbpResult ibp = ibp_reduce(w, lagrangian, base_axes);

    DiffPoly qe(ctx);
    for (Field f : ctx->all_fields()) qe += q.component(f) * euler(lagrangian, f, base_axes);
    VectorDensity pq = div_decompose(qe, base_axes, options);

    VectorDensity p(ctx);
    p.set_component(new_axis, lagrangian);
    for (Axis a : base_axes) p.add_component(a, pq.component(a) - ibp.boundary.component(a));

    DiffPoly product = ibp.core + qe;
    if (!verify_divergence(p, product))
        throw std::logic_error("constructed Noether vector failed verification");

    // Gauge-fix the base slots: each slot above the lowest is replaced by its
    // canonical representative modulo total derivatives along the lower base
    // axes, and the lowest slot is recovered by exact inversion. Runs of the
    // construction that share a slot's gauge class then agree on it exactly.
    if (base_axes.size() >= 2) {
        DiffPoly remainder = product - total_derivative(lagrangian, new_axis);
        for (size_t k = base_axes.size(); k-- > 1;) {
            Axis a = base_axes[k];
            std::vector<Axis> lower(base_axes.begin(), base_axes.begin() + static_cast<long>(k));
            DiffPoly canon = canonical_mod_divergences(p.component(a), lower);
            p.set_component(a, canon);
            remainder -= total_derivative(canon, a);
        }
        p.set_component(base_axes.front(), inv_total_derivative(remainder, base_axes.front()));
        if (!verify_divergence(p, product))
            throw std::logic_error("gauge-fixed Noether vector failed verification");
    }

    std::vector<int> frame;
    for (Axis a : base_axes) frame.push_back(a.index);
    frame.push_back(new_axis.index);
    std::sort(frame.begin(), frame.end());
    const int p_dim = static_cast<int>(base_axes.size());

    KForm form(ctx, p_dim, frame);
    for (int alpha = 1; alpha <= p_dim + 1; ++alpha) {
        // L_(alpha-bar) = (-1)^{alpha p} P_alpha on the cyclic tuple, all in
        // frame-position space.
        std::vector<int> cyc;
        for (int t = alpha; t < p_dim + 1; ++t) cyc.push_back(frame[static_cast<size_t>(t)]);
        for (int t = 0; t + 1 < alpha; ++t) cyc.push_back(frame[static_cast<size_t>(t)]);
        DiffPoly value = p.component(Axis{frame[static_cast<size_t>(alpha - 1)]});
        if ((alpha * p_dim) % 2) value = -value;
        if (!value.is_zero()) form.add_coefficient(cyc, value);
    }

    return BuildResult{std::move(form), std::move(p), w + q, std::move(product),
                       std::move(base_axes)};
}

TransferResult transfer_derivatives(const std::vector<DiffPoly>& qt,
                                    const std::vector<DiffPoly>& e,
                                    const std::vector<TransferSpec>& spec) {
    if (qt.size() != e.size() || qt.size() != spec.size())
        throw ContextError("transfer_derivatives needs matching component counts");
    if (qt.empty()) throw ContextError("transfer_derivatives needs at least one component");
    const ContextPtr& ctx = qt.front().context();
    TransferResult out;
    out.boundary = VectorDensity(ctx);
    for (size_t k = 0; k < qt.size(); ++k) {
        require_same_context(ctx, qt[k].context());
        require_same_context(ctx, e[k].context());
        if (spec[k].a.is_zero()) throw ContextError("transfer constant a_k must be nonzero");
        DiffPoly a = qt[k];
        DiffPoly b = e[k];
        std::vector<std::pair<Axis, DiffPoly>> steps;  // (axis, A_t * B_{t+1})
        for (int axis = 1; axis <= ctx->num_axes(); ++axis) {
            for (int r = 0; r < spec[k].j[Axis{axis}]; ++r) {
                DiffPoly b1 = inv_total_derivative(b, Axis{axis});
                steps.emplace_back(Axis{axis}, a * b1);
                a = total_derivative(a, Axis{axis});
                b = std::move(b1);
            }
        }
        const int total = static_cast<int>(steps.size());
        for (int t = 0; t < total; ++t) {
            DiffPoly g = steps[static_cast<size_t>(t)].second;
            if ((total - 1 - t) % 2) g = -g;
            out.boundary.add_component(steps[static_cast<size_t>(t)].first, g);
        }
        out.qt.push_back(a.scaled(spec[k].a.inverse()));
        out.e.push_back(b.scaled(spec[k].a));
    }
    return out;
}

} // namespace jetform
