#pragma once

#include "noether/lagrangian.hpp"

namespace noether {

/// Non-autonomous Hamiltonian system: H over (t, q, p).
struct HamiltonianSystem {
  int n = 0;
  ScalarField H;
};

struct HamiltonRhs {
  VecX qdot, pdot;
};

/// qdot^i = dH/dp_i, pdot_i = -dH/dq^i.
HamiltonRhs hamilton_rhs(const HamiltonianSystem& sys, const PhasePoint& at);

/// The phase-space bracket in the convention {f,g} = d^i f d_i g - d^i g d_i f
/// with d^i = d/dp_i; note this makes {q1, p1} = -1.
template <class T>
T poisson_bracket_V_t(const ScalarField& f, const ScalarField& g,
                      std::span<const T> phase_packed) {
  const std::size_t n = (phase_packed.size() - 1) / 2;
  auto fg = value_and_grad<T>(f, phase_packed);
  auto gg = value_and_grad<T>(g, phase_packed);
  T acc(0.0);
  for (std::size_t i = 0; i < n; ++i)
    acc = acc + fg.grad[1 + n + i] * gg.grad[1 + i] -
          gg.grad[1 + n + i] * fg.grad[1 + i];
  return acc;
}

double poisson_bracket_V(const ScalarField& f, const ScalarField& g,
                         const PhasePoint& at);

/// {f, g} as a derived phase-frame field (differentiable once more).
ScalarField bracket_field(const ScalarField& f, const ScalarField& g);

/// Component values of the Hamiltonian vector field of f (vertical).
LiftValues hamiltonian_vf(const ScalarField& f, const PhasePoint& at);

/// The Hamiltonian vector field of f as a phase-space vector field.
VectorFieldV hamiltonian_vf_field(const ScalarField& f);

/// d_t Phi + {H, Phi}; identically zero iff Phi is an integral of motion.
double iom_residual(const HamiltonianSystem& sys, const ScalarField& phi,
                    const PhasePoint& at);

/// Symmetry current -p_i u^i + ut H + sigma of a phase-space field.
double ham_symmetry_current(const HamiltonianSystem& sys, const VectorFieldV& v,
                            const ScalarField& sigma, const PhasePoint& at);

/// d^i l_i + d_i u^i; vanishes for every Hamiltonian symmetry.
double symmetry_necessary_residual(const VectorFieldV& v, const PhasePoint& at);

struct InverseNoetherResult {
  LiftValues field;    // components of -X_Phi (vertical)
  double sigma;        // Phi - p_i d^i Phi
  double current;      // equals Phi(at) up to rounding
};

/// Rebuild the symmetry whose current is a given integral of motion.
InverseNoetherResult inverse_noether(const HamiltonianSystem& sys,
                                     const ScalarField& phi, const PhasePoint& at);

/// H - p_i G^i, the Hamiltonian counterpart of the frame energy.
double hamiltonian_function_relative(const HamiltonianSystem& sys,
                                     const ReferenceFrame& g, const PhasePoint& at);

/// The frame energy as a phase-frame field.
ScalarField phase_energy_field(const HamiltonianSystem& sys, const ReferenceFrame& g);

/// p0 + H on the extended phase space.
double homogeneous_hamiltonian(const HamiltonianSystem& sys,
                               const ExtendedPhasePoint& at);

/// The extended-space bracket d^0 f d_t g - d^0 g d_t f + d^i f d_i g - d^i g d_i f
/// for fields over (t, q, p0, p).
double poisson_bracket_T(const ScalarField& f, const ScalarField& g,
                         const ExtendedPhasePoint& at);

/// Pull a phase-frame field back to the extended frame (independent of p0).
ScalarField extend_phase_field(const ScalarField& f, int n);

/// p0 + H as an extended-frame field.
ScalarField homogeneous_field(const HamiltonianSystem& sys);

struct LegendreOptions {
  double tol = 1e-12;   // on |pi - p|_inf
  int max_iter = 50;
  RegularityConfig regularity{};
};

/// Invert the fibre derivative: find qt with pi(t, q, qt) = p by damped
/// Newton iteration. An empty guess starts from qt = p.
JetPoint legendre_inverse(const LagrangianSystem& lsys, const PhasePoint& at,
                          VecX guess = {}, const LegendreOptions& opt = {});

/// The Hamiltonian p.qt* - L(t, q, qt*) of a hyperregular Lagrangian,
/// realized as a built-in evaluator over the phase frame. Supports values
/// and first derivatives (the inversion consumes one dual layer).
HamiltonianSystem associated_hamiltonian(const LagrangianSystem& lsys);

}  // namespace noether
