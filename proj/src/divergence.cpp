#include "jetform/divergence.hpp"

#include "jetform/linsolve.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

namespace jetform {

namespace {

void check_axes(const ContextPtr& ctx, const std::vector<Axis>& axes) {
    if (axes.empty()) throw ContextError("axis set must be nonempty");
    for (Axis a : axes)
        if (a.index < 1 || a.index > ctx->num_axes())
            throw ContextError("axis x" + std::to_string(a.index) + " is not declared");
}

int max_jet_order(const Monomial& m) {
    int n = 0;
    for (auto& [g, e] : m.factors())
        if (g.is_jet()) n = std::max(n, g.jet.order());
    return n;
}

int jet_trig_degree(const Monomial& m) {
    int d = 0;
    for (auto& [g, e] : m.factors())
        if (g.kind != GenKind::Coord) d += e;
    return d;
}

int coord_total(const Monomial& m) {
    int d = 0;
    for (auto& [g, e] : m.factors())
        if (g.kind == GenKind::Coord) d += e;
    return d;
}

bool has_coord(const Monomial& m) {
    for (auto& [g, e] : m.factors())
        if (g.kind == GenKind::Coord) return true;
    return false;
}

// All ways to undo one application of D_a on the monomial: decrement a jet,
// swap a trig factor against a first derivative, or raise a coordinate power.
void removal_candidates(const ContextPtr& ctx, const Monomial& m, Axis a, bool coords_ok,
                        std::set<Monomial>& out) {
    const int num_axes = ctx->num_axes();
    for (auto& [g, e] : m.factors()) {
        if (g.is_jet() && g.jet[a] > 0) {
            Monomial cand = m.times(g, -1).times(Generator::jet_of(g.field(), g.jet.decremented(a)), 1);
            out.insert(std::move(cand));
        }
    }
    for (Field f : ctx->all_fields()) {
        if (!ctx->has_trig(f)) continue;
        Generator s = Generator::sin_of(f);
        Generator c = Generator::cos_of(f);
        Generator u_a = Generator::jet_of(f, MultiIndex::unit(num_axes, a));
        if (m.exponent(u_a) >= 1) {
            if (m.exponent(s) >= 1 && m.exponent(c) == 0)
                out.insert(m.times(s, -1).times(u_a, -1).times(c, 1));
            if (m.exponent(c) >= 1)
                out.insert(m.times(c, -1).times(u_a, -1).times(s, 1));
        }
    }
    if (coords_ok || has_coord(m) || jet_trig_degree(m) == 0)
        out.insert(m.times(Generator::coord(a), 1));
}

struct CandidateSpace {
    // Per axis (in the order of `axes`), the sorted candidate monomials.
    std::vector<std::vector<Monomial>> per_axis;
    size_t total() const {
        size_t n = 0;
        for (auto& v : per_axis) n += v.size();
        return n;
    }
};

CandidateSpace build_candidates(const DiffPoly& f, const std::vector<Axis>& axes,
                                int order_cap, int rounds, bool coords_ok) {
    const ContextPtr& ctx = f.context();
    const int degree_cap = f.jet_degree();
    int coord_cap = 1;
    for (Axis a : axes) coord_cap = std::max(coord_cap, f.coord_degree(a) + 1);

    std::vector<std::set<Monomial>> cand(axes.size());
    std::set<Monomial> roots;
    for (auto& [m, c] : f.terms()) roots.insert(m);

    for (int round = 0; round < rounds; ++round) {
        std::vector<std::set<Monomial>> fresh(axes.size());
        for (size_t k = 0; k < axes.size(); ++k) {
            std::set<Monomial> raw;
            for (const Monomial& m : roots) removal_candidates(ctx, m, axes[k], coords_ok, raw);
            for (const Monomial& m : raw) {
                if (max_jet_order(m) > order_cap) continue;
                if (jet_trig_degree(m) > degree_cap) continue;
                if (coord_total(m) > coord_cap) continue;
                if (m.empty()) continue;
                if (cand[k].insert(m).second) fresh[k].insert(m);
            }
        }
        if (round + 1 == rounds) break;
        // Next round integrates whatever the new candidates' images produce.
        std::set<Monomial> images;
        for (size_t k = 0; k < axes.size(); ++k) {
            for (const Monomial& m : fresh[k]) {
                DiffPoly image = total_derivative(DiffPoly::from_monomial(ctx, m, GaussRat(1)), axes[k]);
                for (auto& [im, c] : image.terms()) images.insert(im);
            }
        }
        roots = std::move(images);
    }

    CandidateSpace space;
    for (auto& s : cand) space.per_axis.emplace_back(s.begin(), s.end());
    return space;
}

struct AssembledSystem {
    SparseSystem system;
    // column -> (axis position, candidate index)
    std::vector<std::pair<size_t, size_t>> columns;
};

AssembledSystem assemble(const DiffPoly& f, const std::vector<Axis>& axes,
                         const CandidateSpace& space) {
    const ContextPtr& ctx = f.context();
    AssembledSystem out;
    struct RowAccum {
        std::map<int, GaussRat> entries;
        GaussRat rhs;
    };
    // Rows in descending monomial order so the solver matches leading terms
    // of F first.
    std::map<Monomial, RowAccum, MonomialLess> rows;

    int col = 0;
    for (size_t k = 0; k < space.per_axis.size(); ++k) {
        for (size_t j = 0; j < space.per_axis[k].size(); ++j) {
            const Monomial& m = space.per_axis[k][j];
            DiffPoly image = total_derivative(DiffPoly::from_monomial(ctx, m, GaussRat(1)), axes[k]);
            for (auto& [im, c] : image.terms()) {
                auto& row = rows[im];
                auto it = row.entries.find(col);
                if (it == row.entries.end())
                    row.entries.emplace(col, c);
                else
                    it->second += c;
            }
            out.columns.emplace_back(k, j);
            ++col;
        }
    }
    for (auto& [m, c] : f.terms()) rows[m].rhs = c;

    out.system.num_cols = col;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        SparseSystem::Row row;
        row.rhs = it->second.rhs;
        for (auto& [c, v] : it->second.entries)
            if (!v.is_zero()) row.entries.emplace(c, v);
        if (row.entries.empty() && row.rhs.is_zero()) continue;
        out.system.rows.push_back(std::move(row));
    }
    return out;
}

std::optional<std::vector<GaussRat>> solve_restricted(const SparseSystem& base,
                                                      const std::vector<bool>& allowed) {
    SparseSystem sys;
    sys.num_cols = base.num_cols;
    for (const auto& row : base.rows) {
        SparseSystem::Row r;
        r.rhs = row.rhs;
        for (auto& [c, v] : row.entries)
            if (allowed[static_cast<size_t>(c)]) r.entries.emplace(c, v);
        if (r.entries.empty() && r.rhs.is_zero()) continue;
        sys.rows.push_back(std::move(r));
    }
    return solve_sparse(sys);
}

} // namespace

bool is_null_lagrangian(const DiffPoly& f, const std::vector<Axis>& axes) {
    check_axes(f.context(), axes);
    for (Field field : f.context()->all_fields())
        if (!euler(f, field, axes).is_zero()) return false;
    return true;
}

bool is_total_divergence(const DiffPoly& f, const std::vector<Axis>& axes) {
    const ContextPtr& ctx = f.context();
    check_axes(ctx, axes);
    for (Field field : ctx->all_fields()) {
        // Group jets by their off-axes derivative part; each group is an
        // independent dependent variable as far as D over `axes` goes.
        std::map<MultiIndex, std::set<MultiIndex>> groups;
        for (const MultiIndex& k : partial_targets(f, field))
            groups[k.off_axes_part(axes)].insert(k);
        for (auto& [base, ks] : groups) {
            DiffPoly acc(ctx);
            for (const MultiIndex& k : ks) {
                DiffPoly w = partial_jet(f, Generator::jet_of(field, k));
                if (w.is_zero()) continue;
                DiffPoly term = total_derivative(w, k.minus(base));
                if (k.minus(base).order() % 2)
                    acc -= term;
                else
                    acc += term;
            }
            if (!acc.is_zero()) return false;
        }
    }
    return true;
}

VectorDensity div_decompose(const DiffPoly& f, const std::vector<Axis>& axes,
                            const DecompositionOptions& options) {
    const ContextPtr& ctx = f.context();
    check_axes(ctx, axes);
    if (f.is_zero()) return VectorDensity(ctx);
    if (!is_total_divergence(f, axes))
        throw NotADivergenceError("expression is not a total divergence over the given axes");

    const int base_order = f.max_order();
    int final_cap = options.max_order_cap.value_or(base_order + 1);
    if (const char* env = std::getenv("MF_MAX_ORDER")) {
        int v = std::atoi(env);
        if (v >= 0) final_cap = v;
    }
    std::vector<int> caps;
    for (int cap : {base_order - 1, base_order, base_order + 1}) {
        cap = std::max(0, std::min(cap, final_cap));
        if (caps.empty() || caps.back() < cap) caps.push_back(cap);
    }
    if (caps.back() < final_cap) caps.push_back(final_cap);

    for (int cap : caps) {
        for (int rounds = 1; rounds <= options.closure_rounds; ++rounds) {
            CandidateSpace space = build_candidates(f, axes, cap, rounds, options.allow_coords);
            if (space.total() == 0) continue;
            AssembledSystem assembled = assemble(f, axes, space);
            auto solution = solve_sparse(assembled.system);
            if (!solution) continue;

            std::vector<bool> allowed(static_cast<size_t>(assembled.system.num_cols), true);
            if (options.prune) {
                // Drop candidates (most complex monomials first) while the
                // system stays solvable; keeps the witness support small.
                std::vector<int> support;
                for (int c = 0; c < assembled.system.num_cols; ++c)
                    if (!(*solution)[static_cast<size_t>(c)].is_zero()) support.push_back(c);
                for (size_t c = 0; c < allowed.size(); ++c) allowed[c] = false;
                for (int c : support) allowed[static_cast<size_t>(c)] = true;
                for (auto it = support.rbegin(); it != support.rend(); ++it) {
                    allowed[static_cast<size_t>(*it)] = false;
                    auto attempt = solve_restricted(assembled.system, allowed);
                    if (attempt)
                        solution = std::move(attempt);
                    else
                        allowed[static_cast<size_t>(*it)] = true;
                }
            }

            VectorDensity p(ctx);
            for (int c = 0; c < assembled.system.num_cols; ++c) {
                const GaussRat& v = (*solution)[static_cast<size_t>(c)];
                if (v.is_zero()) continue;
                auto [axis_pos, cand_idx] = assembled.columns[static_cast<size_t>(c)];
                p.add_component(axes[axis_pos],
                                DiffPoly::from_monomial(ctx, space.per_axis[axis_pos][cand_idx], v));
            }
            if (!verify_divergence(p, f))
                throw std::logic_error("divergence witness failed verification");
            return p;
        }
    }
    std::ostringstream os;
    os << "no divergence witness within order cap " << caps.back();
    throw BasisExhaustedError(os.str());
}

bool is_exact_derivative(const DiffPoly& f, Axis axis) {
    return is_total_divergence(f, {axis});
}

DiffPoly inv_total_derivative(const DiffPoly& f, Axis axis) {
    if (f.is_zero()) return DiffPoly::zero(f.context());
    try {
        VectorDensity p = div_decompose(f, {axis});
        return p.component(axis);
    } catch (const NotADivergenceError&) {
        throw NotExactError("expression is not an exact total x" + std::to_string(axis.index) +
                            " derivative");
    }
}

bool verify_divergence(const VectorDensity& p, const DiffPoly& f) {
    require_same_context(p.context(), f.context());
    return (divergence(p) - f).is_zero();
}

namespace {

bool pure_jets(const Monomial& m) {
    for (auto& [g, e] : m.factors())
        if (!g.is_jet()) return false;
    return true;
}

} // namespace

DiffPoly canonical_mod_divergences(const DiffPoly& f, const std::vector<Axis>& axes) {
    const ContextPtr& ctx = f.context();
    check_axes(ctx, axes);
    // Integration-by-parts normal form on the trig- and coordinate-free
    // sector: a pure-jet monomial is rewritten whenever it is the smallest
    // monomial of some D_a(M) with M pure-jet, which pushes derivatives into
    // balanced products (u_x1*u_x3 rather than u*u_x1x3). Each step replaces
    // a monomial by strictly larger ones of the same degree and total order,
    // so the rewriting terminates and cosets get a unique representative.
    DiffPoly work = f;
    DiffPoly result(ctx);
    while (!work.is_zero()) {
        auto it = work.terms().begin();
        const Monomial m = it->first;
        const GaussRat c = it->second;
        bool reduced = false;
        if (pure_jets(m)) {
            for (Axis a : axes) {
                std::set<Monomial> cands;
                for (auto& [g, e] : m.factors())
                    if (g.jet[a] > 0)
                        cands.insert(
                            m.times(g, -1).times(Generator::jet_of(g.field(), g.jet.decremented(a)), 1));
                for (const Monomial& cand : cands) {
                    DiffPoly image =
                        total_derivative(DiffPoly::from_monomial(ctx, cand, GaussRat(1)), a);
                    auto low = image.terms().begin();
                    if (!(low->first == m)) continue;
                    work -= image.scaled(c / low->second);
                    reduced = true;
                    break;
                }
                if (reduced) break;
            }
        }
        if (!reduced) {
            result.add_term(m, c);
            work.add_term(m, -c);
        }
    }
    return result;
}

} // namespace jetform
