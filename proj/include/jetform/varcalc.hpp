#pragma once

#include "jetform/diffpoly.hpp"

#include <map>
#include <optional>
#include <vector>

namespace jetform {

/// The characteristic Q of an evolutionary vector field: one component per
/// field of the context.
class Characteristic {
  public:
    Characteristic() = default;
    Characteristic(ContextPtr ctx, std::vector<DiffPoly> components);
    static Characteristic zero(const ContextPtr& ctx);

    const ContextPtr& context() const { return ctx_; }
    const std::vector<DiffPoly>& components() const { return comps_; }
    const DiffPoly& component(Field f) const { return comps_.at(static_cast<size_t>(f.index - 1)); }

    Characteristic operator+(const Characteristic& o) const;
    Characteristic operator-() const;

  private:
    ContextPtr ctx_;
    std::vector<DiffPoly> comps_;
};

/// A generalized vector field sum xi_i d/dx_i + phi_alpha d/du^alpha.
struct GeneralizedVectorField {
    ContextPtr ctx;
    std::vector<DiffPoly> xi;   // one per axis
    std::vector<DiffPoly> phi;  // one per field
};

/// A tuple of densities indexed by axis; absent axes are zero. Houses every
/// "Div P" right-hand side.
class VectorDensity {
  public:
    VectorDensity() = default;
    explicit VectorDensity(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    const ContextPtr& context() const { return ctx_; }
    const std::map<int, DiffPoly>& components() const { return comps_; }
    DiffPoly component(Axis a) const;
    void set_component(Axis a, DiffPoly p);
    void add_component(Axis a, const DiffPoly& p);
    bool is_zero() const;

    VectorDensity operator+(const VectorDensity& o) const;
    VectorDensity operator-(const VectorDensity& o) const;

  private:
    ContextPtr ctx_;
    std::map<int, DiffPoly> comps_;
};

/// Sum of D_{x_i} P_i over the components present.
DiffPoly divergence(const VectorDensity& p);

/// Euler operator E_alpha with multi-indices restricted to the given axes;
/// jets carrying derivatives on other axes are treated as constants.
DiffPoly euler(const DiffPoly& lagrangian, Field field, const std::vector<Axis>& axes);

/// Restricted variational derivative of the appendix: sum over J supported
/// on `axes` of (-D)_J d(L)/d(u_{I+J}). Returns zero when any component of
/// I is negative, per the convention for shifted indices.
DiffPoly variational_derivative(const DiffPoly& lagrangian, Field field,
                                const std::vector<int>& index, const std::vector<Axis>& axes);

/// Prolongation of the evolutionary field v_Q applied to f:
/// sum over fields and jets of D_J(Q_alpha) * df/du^alpha_J.
DiffPoly prolong_apply(const Characteristic& q, const DiffPoly& f);

/// Evolutionary representative Q_alpha = phi_alpha - sum_i xi_i u^alpha_{x_i}.
Characteristic evolutionary_representative(const GeneralizedVectorField& v);

struct IbpResult {
    DiffPoly core;            // Q . E(L)
    VectorDensity boundary;   // pr v_Q(L) = core + Div boundary
};

/// Tracked integration by parts: rewrites pr v_Q(L) as Q.E(L) plus an
/// explicit divergence by peeling one derivative at a time, axes in
/// ascending order. L's jets must lie on the given axes.
IbpResult ibp_reduce(const Characteristic& q, const DiffPoly& lagrangian,
                     const std::vector<Axis>& axes);

struct SymmetryReport {
    bool is_symmetry = false;
    std::optional<VectorDensity> certificate;  // B with Div B = pr v_Q(L)
    bool basis_exhausted = false;              // true symmetry, no witness found
};

/// Variational-symmetry test by Euler annihilation of pr v_Q(L); on success
/// optionally searches for a divergence certificate.
SymmetryReport symmetry_check(const Characteristic& q, const DiffPoly& lagrangian,
                              const std::vector<Axis>& axes, bool want_certificate = true);

/// Frechet derivative D_F(R)_k = sum d(F_k)/d(u^alpha_J) * D_J R_alpha.
std::vector<DiffPoly> frechet(const std::vector<DiffPoly>& f, const Characteristic& r);

/// Adjoint D_F*(R)_alpha = sum_k (-D)_J (d(F_k)/d(u^alpha_J) * R_k).
std::vector<DiffPoly> frechet_adjoint(const std::vector<DiffPoly>& f,
                                      const std::vector<DiffPoly>& r);

/// True iff the Frechet derivative of F is self-adjoint, tested identically
/// in fresh placeholder fields. F must be square (one component per field).
bool helmholtz_check(const std::vector<DiffPoly>& f);

/// Lift a value into an extended context (same axes, fields a prefix).
DiffPoly lift_to(const DiffPoly& f, const ContextPtr& wider);

/// Max jet order across the components of a characteristic.
int max_order(const Characteristic& q);

} // namespace jetform
