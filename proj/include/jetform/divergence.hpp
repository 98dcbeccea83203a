#pragma once

#include "jetform/varcalc.hpp"

#include <set>
#include <stdexcept>

namespace jetform {

class NotADivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class BasisExhaustedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NotExactError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The candidate space used by one undetermined-coefficients attempt.
struct DecompositionBasis {
    std::vector<Axis> axes;
    int order_bound = 0;
    int degree_bound = 0;
    std::set<Generator> generators;
};

struct DecompositionOptions {
    /// Final rung of the order escalation; defaults to max_order(F)+1 and is
    /// overridden by the MF_MAX_ORDER environment variable when set.
    std::optional<int> max_order_cap;
    /// Rounds of candidate closure (removals applied to candidate images).
    int closure_rounds = 3;
    /// Admit coordinate generators even when absent from F.
    bool allow_coords = false;
    /// Greedily drop candidates while the system stays solvable, to return a
    /// witness of small support.
    bool prune = true;
};

/// Membership test for total divergences over the given axes via Euler
/// annihilation. F's jets must lie on the given axes.
bool is_null_lagrangian(const DiffPoly& f, const std::vector<Axis>& axes);

/// Generalized membership test: jets may carry derivatives on other axes,
/// which are handled by treating each off-axes jet base as its own field.
bool is_total_divergence(const DiffPoly& f, const std::vector<Axis>& axes);

/// Exact witness P with Div P = F over the given axes, found by undetermined
/// coefficients over candidate monomials harvested from F and solved by
/// exact sparse elimination. The witness is verified before returning.
/// Throws NotADivergenceError when F fails the membership test and
/// BasisExhaustedError when no witness exists within the escalation cap.
VectorDensity div_decompose(const DiffPoly& f, const std::vector<Axis>& axes,
                            const DecompositionOptions& options = {});

/// True iff F is an exact total derivative along the single given axis,
/// other-axis jets allowed.
bool is_exact_derivative(const DiffPoly& f, Axis axis);

/// G with D_axis(G) = F, exactly; throws NotExactError otherwise.
DiffPoly inv_total_derivative(const DiffPoly& f, Axis axis);

/// Exact check that Div P = F.
bool verify_divergence(const VectorDensity& p, const DiffPoly& f);

/// The canonical representative of f modulo total derivatives along the
/// given axes: every monomial that leads some D_a(M) is eliminated, largest
/// first, so all members of a coset f + sum_a D_a(...) map to the same
/// normal form.
DiffPoly canonical_mod_divergences(const DiffPoly& f, const std::vector<Axis>& axes);

} // namespace jetform
