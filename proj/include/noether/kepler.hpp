#pragma once

#include <optional>

#include "noether/integrate.hpp"

namespace noether {
namespace kepler {

/// Built-in Kepler pair: L = (1/2) sum qt_i^2 + 1/r and H = (1/2) p^2 - 1/r.
/// Action-angle charts exist for dim == 2 only.
struct KeplerSystem {
  LagrangianSystem lag;
  HamiltonianSystem ham;
};
KeplerSystem kepler_system(int dim);

/// Conserved quantities at a 2-dof phase point, plus the orbit shape
/// parameters where they are defined.
struct KeplerInvariants {
  double H = 0.0;
  double M12 = 0.0;
  double A1 = 0.0, A2 = 0.0;
  double Asq = 0.0, Msq = 0.0;
  double a = 0.0;  // semi-axis, |1/(2H)|; meaningless when H == 0
  double e = 0.0;  // eccentricity sqrt(Asq)
};
KeplerInvariants invariants(const PhasePoint& at);

enum class Region { Minus, Plus, Excluded };
const char* region_name(Region r);

/// Minus: H < 0 and M12 != 0; Plus: H > 0 and M12 != 0; everything within
/// eps of the boundary is Excluded.
Region classify(const PhasePoint& at, double eps = 1e-10);

/// (L1, L2) = A / sqrt(-2H) on Minus, (K1, K2) = A / sqrt(2H) on Plus.
struct ScaledIntegrals {
  Region region;
  double s1 = 0.0, s2 = 0.0;
};
ScaledIntegrals scaled_integrals(const PhasePoint& at, double eps = 1e-10);

/// Momentum-map values (x1, x2, x3): (-L1, -L2, -M12) on Minus,
/// (-K1, -K2, -M12) on Plus.
struct MomentumMap {
  Region region;
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;
};
MomentumMap momentum_map(const PhasePoint& at, double eps = 1e-10);

/// Residuals of every bracket relation of the region's Lie algebra plus the
/// raw angular-momentum / eccentricity-vector relations, evaluated through
/// the generic Poisson machinery.
struct StructureResiduals {
  Region region;
  std::vector<std::string> labels;
  std::vector<double> residuals;
  double max_abs() const;
};
StructureResiduals structure_residuals(const PhasePoint& at, double eps = 1e-10);

/// Relative residual of the Casimir relation: M^2 + L^2 + 1/(2H) on Minus,
/// K^2 - M^2 - 1/(2H) on Plus, scaled by the size of its terms.
double casimir_residual(const PhasePoint& at, double eps = 1e-10);

/// Global action-angle chart values. The cyclic coordinate advances at unit
/// rate along the flow; its period on Minus is 2*pi*a^(3/2) (unbounded
/// motion on Plus has no period).
struct ActionAngleState {
  Region region = Region::Excluded;
  double I = 0.0;      // action; equals H
  double x1 = 0.0;
  double angle = 0.0;  // gamma on Minus, lambda on Plus
  double cyclic = 0.0; // alpha on Minus, tau on Plus
  double anomaly = 0.0;  // eccentric anomaly E used for the cyclic value
  std::optional<double> period;
};
ActionAngleState action_angle(const PhasePoint& at, double eps = 1e-10);

/// Max deviation of the numerically pushed-forward Poisson bivector from its
/// action-angle block form, via central differences through the chart.
double bivector_residual(const PhasePoint& at, double eps = 1e-10,
                         double fd_step = 1e-6);

/// Rotation-symmetry checks of the Lagrangian picture at one second-jet
/// point: max symmetry residual over the rotation generators, max mismatch
/// of their Noether currents against q^a pi_b - q^b pi_a, and the max
/// on-shell total derivative of the eccentricity-vector components.
struct LagrangianKeplerReport {
  double max_symmetry_residual = 0.0;
  double max_current_mismatch = 0.0;
  double max_onshell_derivative = 0.0;
  double max_abs() const;
};
LagrangianKeplerReport lagrangian_kepler_checks(int dim, const Jet2Point& at);

/// Named phase-frame integrals of the 2-dof system: H, M12, A1, A2, the
/// region-scaled L1, L2, K1, K2, and the chart angles gamma, lambda.
ScalarField phase_integral(const std::string& name);

/// Jet-frame monitors of the 2- or 3-dof Lagrangian picture: H, M12 (M13,
/// M23 for dim 3), A1..Adim.
ScalarField jet_monitor(const std::string& name, int dim);

/// Rotation generator q^b d_a - q^a d_b as a configuration-space field.
VectorFieldQ rotation_generator(int dim, int a, int b);

/// The vertical phase-space symmetries whose currents are the
/// eccentricity-vector components (index 1 or 2, dim 2).
VectorFieldV runge_lenz_symmetry(int index);

}  // namespace kepler
}  // namespace noether
