#pragma once

#include <optional>

#include "noether/geometry.hpp"

namespace noether {

/// First-order Lagrangian system: L over (t, q, qt), optional external
/// force components on the same frame.
struct LagrangianSystem {
  int n = 0;
  ScalarField L;
  std::vector<ScalarField> force;  // empty means zero

  bool has_force() const { return !force.empty(); }
};

/// Momenta pi_i = dL/dqt_i, generically over the scalar type.
template <class T>
std::vector<T> momenta_t(const LagrangianSystem& sys, std::span<const T> jet_packed) {
  auto vg = value_and_grad<T>(sys.L, jet_packed);
  const std::size_t n = static_cast<std::size_t>(sys.n);
  std::vector<T> pi(vg.grad.begin() + 1 + n, vg.grad.begin() + 1 + 2 * n);
  return pi;
}

VecX momenta(const LagrangianSystem& sys, const JetPoint& at);

/// Velocity Hessian pi_ji = d^2 L / dqt_j dqt_i at a packed jet tuple.
MatX velocity_hessian(const LagrangianSystem& sys, std::span<const double> jet_packed);

/// Lagrange operator components d_i L - d_t pi_i (no external force).
VecX lagrange_operator(const LagrangianSystem& sys, const Jet2Point& at);

/// Equation-of-motion residual including the external force.
VecX el_residual(const LagrangianSystem& sys, const Jet2Point& at);

/// det(pi_ji); compare |det| against regularity_threshold(sys, at) to
/// classify the point as regular.
double regularity(const LagrangianSystem& sys, const JetPoint& at);

struct RegularityConfig {
  double rel_tol = 1e-12;  // |det| >= rel_tol * max(1, |pi_ji|_inf)^n
};

/// Accelerations solving the Lagrange equation at the point.
VecX lagrange_dynamics(const LagrangianSystem& sys, const JetPoint& at,
                       const RegularityConfig& cfg = {});

double lie_derivative_L(const LagrangianSystem& sys, const VectorFieldQ& v,
                        const Jet2Point& at);

/// Residual of the first variational formula; zero identically.
double variational_identity_residual(const LagrangianSystem& sys,
                                     const VectorFieldQ& v, const Jet2Point& at);

/// Lie derivative minus d_t sigma; zero everywhere iff v is a symmetry with
/// gauge term sigma. A default (invalid) sigma means zero.
double symmetry_residual(const LagrangianSystem& sys, const VectorFieldQ& v,
                         const ScalarField& sigma, const Jet2Point& at);

double symmetry_current(const LagrangianSystem& sys, const VectorFieldQ& v,
                        const ScalarField& sigma, const JetPoint& at);

/// Noether current -pi_i v^i of a vertical field (rejects ut = 1).
double noether_current(const LagrangianSystem& sys, const VectorFieldQ& v,
                       const JetPoint& at);

/// Energy relative to a frame: pi_i (qt^i - G^i) - L.
double energy_function(const LagrangianSystem& sys, const ReferenceFrame& g,
                       const JetPoint& at);

/// E_G - E_G' - J_{G-G'}; vanishes identically.
double frame_shift(const LagrangianSystem& sys, const ReferenceFrame& g1,
                   const ReferenceFrame& g2, const JetPoint& at);

/// The symmetry current as a jet-frame field (for drift monitoring).
ScalarField current_field(const LagrangianSystem& sys, const VectorFieldQ& v,
                          const ScalarField& sigma);

/// The frame energy as a jet-frame field.
ScalarField energy_field(const LagrangianSystem& sys, const ReferenceFrame& g);

}  // namespace noether
