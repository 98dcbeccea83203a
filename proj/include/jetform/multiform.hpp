#pragma once

#include "jetform/divergence.hpp"
#include "jetform/varcalc.hpp"

#include <map>
#include <vector>

namespace jetform {

class SymmetryError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A Lagrangian k-form. Coefficients are stored on strictly increasing axis
/// tuples; access through any permutation applies the antisymmetry sign.
/// The frame is the set of axes the form lives over (exterior derivatives
/// and EL equations enumerate tuples within it); it defaults to all axes.
class KForm {
  public:
    KForm() = default;
    KForm(ContextPtr ctx, int degree, std::vector<int> frame = {});

    const ContextPtr& context() const { return ctx_; }
    int degree() const { return degree_; }
    const std::vector<int>& frame() const { return frame_; }
    const std::map<std::vector<int>, DiffPoly>& coefficients() const { return coeffs_; }

    /// Store coefficient of dx_{t1} ^ ... ^ dx_{tk}; the tuple may be any
    /// permutation of distinct axes, resolved to increasing order by sign.
    void set_coefficient(const std::vector<int>& tuple, const DiffPoly& value);
    void add_coefficient(const std::vector<int>& tuple, const DiffPoly& value);
    /// Signed lookup; absent tuples are zero.
    DiffPoly coefficient(const std::vector<int>& tuple) const;

    /// Max jet order over the stored coefficients.
    int max_order() const;

  private:
    ContextPtr ctx_;
    int degree_ = 0;
    std::vector<int> frame_;
    std::map<std::vector<int>, DiffPoly> coeffs_;
};

/// Sign of the permutation sorting `tuple` ascending (0 when a repeat makes
/// the wedge vanish). `sorted` receives the ascending tuple.
int sort_tuple_sign(std::vector<int>& tuple);

/// Exterior derivative: the (k+1)-form with coefficients
/// A^{i1..ik+1} = sum_alpha (-1)^{k(alpha+1)} D_{x_{i_alpha}} L_(alpha-bar),
/// tuples ranging over the form's frame.
KForm exterior_derivative(const KForm& form);

/// One oriented rewrite u^alpha_{lead} -> rhs; derivatives of the lead
/// rewrite to derivatives of the rhs.
struct EOMRule {
    Field field;
    MultiIndex lead;
    DiffPoly rhs;
};

/// An oriented equations-of-motion rewrite system with pairwise-distinct
/// leads; confluence is checked empirically up to confluence_order.
class EOMSystem {
  public:
    EOMSystem() = default;
    EOMSystem(ContextPtr ctx, std::vector<EOMRule> rules, std::optional<int> confluence_order = {});

    const ContextPtr& context() const { return ctx_; }
    const std::vector<EOMRule>& rules() const { return rules_; }
    int confluence_order() const { return confluence_order_; }

    /// First rule whose lead the jet dominates, if any.
    const EOMRule* match(Field f, const MultiIndex& j) const;

  private:
    ContextPtr ctx_;
    std::vector<EOMRule> rules_;
    int confluence_order_ = 2;
};

/// Rewrites every reducible jet to the corresponding derivative of its
/// rule's right-hand side, innermost jets first, until none remain.
DiffPoly reduce_mod_eom(const DiffPoly& f, const EOMSystem& sys);

/// Memoizing reducer; reuse one instance across many reductions against the
/// same system.
class EomReducer {
  public:
    explicit EomReducer(const EOMSystem& sys) : sys_(&sys) {}
    DiffPoly reduce(const DiffPoly& f);
    /// Reduction of a single jet, forcing the first step through `rule`.
    DiffPoly reduce_jet_via(Field f, const MultiIndex& j, const EOMRule& rule);

  private:
    DiffPoly reduced_jet(Field f, const MultiIndex& j);
    const EOMSystem* sys_;
    std::map<std::pair<int, MultiIndex>, DiffPoly> cache_;
};

/// Every same-field rule pair, padded up to the system's confluence order
/// around the lead lub, reduces identically through either rule first.
bool commuting_check(const EOMSystem& sys);

struct ClosureReport {
    bool closed = false;
    bool double_zero = false;
    /// Tuples of dL whose reduction (or some jet partial's reduction) is
    /// nonzero, with the offending residual.
    std::vector<std::pair<std::vector<int>, DiffPoly>> residuals;
};

/// dL = 0 mod the rewrite system, and the double-zero refinement that every
/// jet partial of every dL coefficient also reduces to zero.
ClosureReport closure_check(const KForm& form, const EOMSystem& sys);

/// One multiform Euler-Lagrange expression (Theorem-A.1 style):
/// sum_alpha (-1)^{alpha k} delta L_(alpha-bar) / delta u_{I \ i_alpha}.
struct ELEntry {
    std::vector<int> tuple;
    Field field;
    std::vector<int> index;  // I over the context axes
    DiffPoly expr;
};

/// All EL expressions over increasing (k+1)-tuples of the frame and all I
/// supported on the frame with |I| <= max jet order of the form + 1.
std::vector<ELEntry> multiform_el_equations(const KForm& form);

/// The direct criterion dA/du_I for the same tuple/index range, for
/// cross-validation against the variational form.
std::vector<ELEntry> multiform_el_direct(const KForm& form);

struct BuildResult {
    KForm form;
    VectorDensity p;           // Div p = qtilde . E(L), p[new_axis] = L
    Characteristic qtilde;     // u_{new} + Q
    DiffPoly product;          // qtilde . E(L)
    std::vector<Axis> base_axes;
};

/// Theorem-3.1 construction: from a Lagrangian over the base axes and a
/// variational symmetry characteristic Q (signed so that u_new + Q = 0 is
/// the flow), produce the p-form with coefficients L_(i-bar) = (-1)^{ip} P_i
/// over the frame base+new. P's new-axis component is L itself.
BuildResult build_multiform(const DiffPoly& lagrangian, const Characteristic& q, Axis new_axis,
                            std::vector<Axis> base_axes = {},
                            const DecompositionOptions& options = {});

struct TransferSpec {
    GaussRat a = GaussRat(1);
    MultiIndex j;
};

struct TransferResult {
    std::vector<DiffPoly> qt;  // (1/a_k) D_{J_k} Qt_k
    std::vector<DiffPoly> e;   // a_k D^{-1}_{J_k} E_k
    VectorDensity boundary;    // sum qt'_k e'_k = sum (-1)^{|J_k|} Qt_k E_k + Div boundary
};

/// Derivative transfer between the factors of sum Qt_k . E_k: differentiates
/// Qt_k by D_{J_k}, integrates E_k exactly (throws NotExactError when E_k is
/// not in the image of D_{J_k}), and returns the exact boundary of the
/// integration by parts. Each |J_k| transfer step flips the product's sign,
/// so the relation carries the factor (-1)^{|J_k|}.
TransferResult transfer_derivatives(const std::vector<DiffPoly>& qt,
                                    const std::vector<DiffPoly>& e,
                                    const std::vector<TransferSpec>& spec);

} // namespace jetform
