#pragma once

#include <functional>
#include <string>

#include "noether/hamiltonian.hpp"

namespace noether {

enum class FlowKind { Hamiltonian, Lagrangian };

/// Time-ordered samples of an integrated flow. For Hamiltonian flows the
/// state is (q, p); for Lagrangian flows it is (q, qt). `steps` holds the
/// accepted-step nodes; `ts`/`states` the requested sample grid (Hermite
/// dense output between accepted steps).
struct Trajectory {
  FlowKind kind = FlowKind::Hamiltonian;
  int n = 0;  // degrees of freedom
  std::vector<double> ts;
  std::vector<VecX> states;
  std::vector<double> step_ts;
  std::vector<VecX> step_states;
  long accepted = 0;
  long rejected = 0;
  double rtol = 0.0, atol = 0.0;

  VecX packed(std::size_t i) const;  // (t, state...) in frame order
};

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Number of evenly spaced output samples (>= 2); 0 means "sample at the
  /// accepted steps only".
  int samples = 1000;
};

Trajectory integrate_hamiltonian(const HamiltonianSystem& sys, const PhasePoint& from,
                                 double t_end, const IntegrateOptions& opt = {});

Trajectory integrate_lagrangian(const LagrangianSystem& sys, const JetPoint& from,
                                double t_end, const IntegrateOptions& opt = {});

/// One monitored quantity along a trajectory. When `circular` is set the
/// drift is measured as angular distance modulo 2*pi.
struct Monitor {
  std::string name;
  ScalarField field;  // on the jet or phase frame matching the trajectory
  bool circular = false;
};

struct MonitorDrift {
  std::string name;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double rel_drift = 0.0;  // max |v - v0| / (1 + |v0|)
  bool circular = false;
  bool pass = false;
};

struct ConservationReport {
  double tol = 0.0;
  std::vector<MonitorDrift> monitors;
  bool pass = true;
};

ConservationReport drift_report(const Trajectory& traj,
                                std::span<const Monitor> monitors, double tol);

/// Generic adaptive Dormand-Prince 5(4) driver used by both flows.
Trajectory integrate_ode(const std::function<VecX(double, const VecX&)>& rhs,
                         double t0, VecX y0, double t_end,
                         const IntegrateOptions& opt);

}  // namespace noether
