#include "noether/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noether {

namespace {

// Dormand-Prince 5(4) tableau. The last row of `a` doubles as the 5th-order
// weights (FSAL); `e` holds the embedded error weights.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kShrink = 0.2;
constexpr double kGrow = 5.0;

struct Step {
  double t0, t1;
  VecX y0, y1, f0, f1;
};

// Cubic Hermite interpolation on an accepted step (4th-order accurate).
VecX hermite(const Step& s, double t) {
  const double h = s.t1 - s.t0;
  const double u = (t - s.t0) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  VecX y(s.y0.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = h00 * s.y0[i] + h * h10 * s.f0[i] + h01 * s.y1[i] + h * h11 * s.f1[i];
  return y;
}

}  // namespace

Trajectory integrate_ode(const std::function<VecX(double, const VecX&)>& rhs,
                         double t0, VecX y0, double t_end,
                         const IntegrateOptions& opt) {
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0))
    throw UsageError("integration tolerances must be positive");
  if (t_end == t0) throw UsageError("empty integration span");
  const double dir = t_end > t0 ? 1.0 : -1.0;
  const std::size_t dim = y0.size();

  Trajectory traj;
  traj.rtol = opt.rtol;
  traj.atol = opt.atol;

  auto eval = [&](double t, const VecX& y) -> VecX {
    try {
      return rhs(t, y);
    } catch (const Error& e) {
      throw IntegrationError(std::string("flow left the domain at t = ") +
                                 std::to_string(t) + ": " + e.what(),
                             t);
    }
  };

  double t = t0;
  VecX y = std::move(y0);
  VecX f = eval(t, y);

  // Initial step from the usual |y|/|f| heuristic.
  double ynorm = 0.0, fnorm = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    ynorm = std::max(ynorm, std::abs(y[i]));
    fnorm = std::max(fnorm, std::abs(f[i]));
  }
  double h = dir * std::min(0.1 * std::abs(t_end - t0),
                            0.01 * (1.0 + ynorm) / (1.0 + fnorm));

  std::vector<Step> steps;
  traj.step_ts.push_back(t);
  traj.step_states.push_back(y);

  VecX k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), ytmp(dim), y5(dim), errv(dim);

  const double tiny = 16.0 * std::numeric_limits<double>::epsilon();
  while (dir * (t_end - t) > 0.0) {
    if (dir * (t + h) > dir * t_end) h = t_end - t;
    if (std::abs(h) < tiny * std::max(1.0, std::abs(t)))
      throw IntegrationError(
          "step size underflow near t = " + std::to_string(t) +
              " (probable singularity)",
          t);

    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * f[i];
    k2 = eval(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a31 * f[i] + a32 * k2[i]);
    k3 = eval(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = eval(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = eval(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    k6 = eval(t + h, ytmp);
    for (std::size_t i = 0; i < dim; ++i)
      y5[i] = y[i] + h * (a71 * f[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                          a76 * k6[i]);
    VecX k7 = eval(t + h, y5);

    double errnorm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      errv[i] = h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                     e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double r = errv[i] / sc;
      errnorm += r * r;
    }
    errnorm = std::sqrt(errnorm / static_cast<double>(dim));
    if (!std::isfinite(errnorm)) {
      traj.rejected++;
      h *= kShrink;
      continue;
    }

    if (errnorm <= 1.0) {
      Step s{t, t + h, y, y5, f, k7};
      steps.push_back(s);
      t += h;
      y = y5;
      f = std::move(k7);  // FSAL
      traj.accepted++;
      traj.step_ts.push_back(t);
      traj.step_states.push_back(y);
      double fac = errnorm == 0.0 ? kGrow
                                  : std::clamp(kSafety * std::pow(errnorm, -0.2),
                                               kShrink, kGrow);
      h *= fac;
    } else {
      traj.rejected++;
      double fac = std::clamp(kSafety * std::pow(errnorm, -0.2), kShrink, 1.0);
      h *= fac;
    }
  }

  // Output grid.
  if (opt.samples == 0) {
    traj.ts = traj.step_ts;
    traj.states = traj.step_states;
    return traj;
  }
  const int m = std::max(2, opt.samples);
  traj.ts.reserve(m);
  traj.states.reserve(m);
  std::size_t si = 0;
  for (int k = 0; k < m; ++k) {
    double tk =
        t0 + (t_end - t0) * (static_cast<double>(k) / static_cast<double>(m - 1));
    while (si + 1 < steps.size() && dir * (tk - steps[si].t1) > 0.0) ++si;
    traj.ts.push_back(tk);
    if (k == m - 1) {
      traj.states.push_back(traj.step_states.back());
    } else {
      traj.states.push_back(hermite(steps[si], tk));
    }
  }
  return traj;
}

VecX Trajectory::packed(std::size_t i) const {
  VecX out;
  out.reserve(1 + states[i].size());
  out.push_back(ts[i]);
  out.insert(out.end(), states[i].begin(), states[i].end());
  return out;
}

Trajectory integrate_hamiltonian(const HamiltonianSystem& sys, const PhasePoint& from,
                                 double t_end, const IntegrateOptions& opt) {
  const std::size_t n = from.dim();
  auto rhs = [&sys, n](double t, const VecX& y) -> VecX {
    PhasePoint pt;
    pt.t = t;
    pt.q.assign(y.begin(), y.begin() + n);
    pt.p.assign(y.begin() + n, y.end());
    HamiltonRhs d = hamilton_rhs(sys, pt);
    VecX dy(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = d.qdot[i];
      dy[n + i] = d.pdot[i];
    }
    return dy;
  };
  VecX y0;
  y0.reserve(2 * n);
  y0.insert(y0.end(), from.q.begin(), from.q.end());
  y0.insert(y0.end(), from.p.begin(), from.p.end());
  Trajectory traj = integrate_ode(rhs, from.t, std::move(y0), t_end, opt);
  traj.kind = FlowKind::Hamiltonian;
  traj.n = static_cast<int>(n);
  return traj;
}

Trajectory integrate_lagrangian(const LagrangianSystem& sys, const JetPoint& from,
                                double t_end, const IntegrateOptions& opt) {
  const std::size_t n = from.dim();
  auto rhs = [&sys, n](double t, const VecX& y) -> VecX {
    JetPoint pt;
    pt.t = t;
    pt.q.assign(y.begin(), y.begin() + n);
    pt.qt.assign(y.begin() + n, y.end());
    VecX qtt = lagrange_dynamics(sys, pt);
    VecX dy(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = pt.qt[i];
      dy[n + i] = qtt[i];
    }
    return dy;
  };
  VecX y0;
  y0.reserve(2 * n);
  y0.insert(y0.end(), from.q.begin(), from.q.end());
  y0.insert(y0.end(), from.qt.begin(), from.qt.end());
  Trajectory traj = integrate_ode(rhs, from.t, std::move(y0), t_end, opt);
  traj.kind = FlowKind::Lagrangian;
  traj.n = static_cast<int>(n);
  return traj;
}

ConservationReport drift_report(const Trajectory& traj,
                                std::span<const Monitor> monitors, double tol) {
  ConservationReport rep;
  rep.tol = tol;
  const double two_pi = 2.0 * M_PI;
  for (const Monitor& mon : monitors) {
    MonitorDrift d;
    d.name = mon.name;
    d.circular = mon.circular;
    for (std::size_t i = 0; i < traj.ts.size(); ++i) {
      VecX x = traj.packed(i);
      double v = mon.field.value(x);
      if (i == 0) {
        d.initial = v;
        continue;
      }
      double diff = v - d.initial;
      if (mon.circular) diff = std::remainder(diff, two_pi);
      d.max_abs_drift = std::max(d.max_abs_drift, std::abs(diff));
    }
    d.rel_drift = d.max_abs_drift / (1.0 + std::abs(d.initial));
    d.pass = d.rel_drift <= tol;
    rep.pass = rep.pass && d.pass;
    rep.monitors.push_back(std::move(d));
  }
  return rep;
}

}  // namespace noether
