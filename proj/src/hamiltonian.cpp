#include "noether/hamiltonian.hpp"

#include <cmath>

namespace noether {

HamiltonRhs hamilton_rhs(const HamiltonianSystem& sys, const PhasePoint& at) {
  VecX x = at.pack();
  VecX g = grad(sys.H, x);
  const std::size_t n = at.dim();
  HamiltonRhs out;
  out.qdot.resize(n);
  out.pdot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.qdot[i] = g[1 + n + i];
    out.pdot[i] = -g[1 + i];
  }
  return out;
}

double poisson_bracket_V(const ScalarField& f, const ScalarField& g,
                         const PhasePoint& at) {
  VecX x = at.pack();
  return poisson_bracket_V_t<double>(f, g, std::span<const double>(x));
}

ScalarField bracket_field(const ScalarField& f, const ScalarField& g) {
  return ScalarField::from_fn(f.frame(), [f, g](auto xs) {
    using T = typename decltype(xs)::value_type;
    return poisson_bracket_V_t<T>(f, g, xs);
  });
}

LiftValues hamiltonian_vf(const ScalarField& f, const PhasePoint& at) {
  VecX x = at.pack();
  VecX g = grad(f, x);
  const std::size_t n = at.dim();
  LiftValues out;
  out.ut = 0;
  out.u.resize(n);
  out.l.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] = g[1 + n + i];
    out.l[i] = -g[1 + i];
  }
  return out;
}

VectorFieldV hamiltonian_vf_field(const ScalarField& f) {
  const std::size_t n = (f.frame().size() - 1) / 2;
  VectorFieldV out;
  out.ut = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out.u.push_back(ScalarField::from_fn(f.frame(), [f, n, i](auto xs) {
      using T = typename decltype(xs)::value_type;
      return value_and_grad<T>(f, xs).grad[1 + n + i];
    }));
    out.l.push_back(ScalarField::from_fn(f.frame(), [f, i](auto xs) {
      using T = typename decltype(xs)::value_type;
      return -value_and_grad<T>(f, xs).grad[1 + i];
    }));
  }
  return out;
}

double iom_residual(const HamiltonianSystem& sys, const ScalarField& phi,
                    const PhasePoint& at) {
  VecX x = at.pack();
  VecX gh = grad(sys.H, x);
  VecX gp = grad(phi, x);
  const std::size_t n = at.dim();
  double acc = gp[0];
  for (std::size_t i = 0; i < n; ++i)
    acc += gh[1 + n + i] * gp[1 + i] - gp[1 + n + i] * gh[1 + i];
  return acc;
}

double ham_symmetry_current(const HamiltonianSystem& sys, const VectorFieldV& v,
                            const ScalarField& sigma, const PhasePoint& at) {
  VecX x = at.pack();
  const std::size_t n = at.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc -= at.p[i] * v.u[i].value(x);
  if (v.ut) acc += sys.H.value(x);
  if (sigma.valid()) acc += sigma.value(x);
  return acc;
}

double symmetry_necessary_residual(const VectorFieldV& v, const PhasePoint& at) {
  VecX x = at.pack();
  const std::size_t n = at.dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += grad(v.l[i], x)[1 + n + i];
    acc += grad(v.u[i], x)[1 + i];
  }
  return acc;
}

InverseNoetherResult inverse_noether(const HamiltonianSystem& sys,
                                     const ScalarField& phi, const PhasePoint& at) {
  (void)sys;
  VecX x = at.pack();
  const std::size_t n = at.dim();
  VecX g = grad(phi, x);
  double phiv = phi.value(x);

  InverseNoetherResult out;
  out.field.ut = 0;
  out.field.u.resize(n);
  out.field.l.resize(n);
  double s = 0.0;  // p_i d^i Phi
  for (std::size_t i = 0; i < n; ++i) {
    out.field.u[i] = -g[1 + n + i];
    out.field.l[i] = g[1 + i];
    s += at.p[i] * g[1 + n + i];
  }
  out.sigma = phiv - s;
  out.current = s + out.sigma;  // -p_i u^i + sigma with u = -dPhi/dp
  return out;
}

double hamiltonian_function_relative(const HamiltonianSystem& sys,
                                     const ReferenceFrame& g, const PhasePoint& at) {
  VecX x = at.pack();
  const std::size_t n = at.dim();
  VecX tq(x.begin(), x.begin() + 1 + n);
  double acc = sys.H.value(x);
  for (std::size_t i = 0; i < n; ++i) acc -= at.p[i] * g.g[i].value(tq);
  return acc;
}

ScalarField phase_energy_field(const HamiltonianSystem& sys, const ReferenceFrame& g) {
  return ScalarField::from_fn(sys.H.frame(), [sys, g](auto xs) {
    using T = typename decltype(xs)::value_type;
    const std::size_t n = static_cast<std::size_t>(sys.n);
    std::vector<T> gi = detail::eval_config_fields<T>(g.g, xs, n);
    T acc = sys.H.eval<T>(xs);
    for (std::size_t i = 0; i < n; ++i) acc = acc - xs[1 + n + i] * gi[i];
    return acc;
  });
}

double homogeneous_hamiltonian(const HamiltonianSystem& sys,
                               const ExtendedPhasePoint& at) {
  PhasePoint v = at.project();
  VecX x = v.pack();
  return at.p0 + sys.H.value(x);
}

double poisson_bracket_T(const ScalarField& f, const ScalarField& g,
                         const ExtendedPhasePoint& at) {
  VecX x = at.pack();
  VecX gf = grad(f, x);
  VecX gg = grad(g, x);
  const std::size_t n = at.dim();
  const std::size_t p0 = 1 + n;
  double acc = gf[p0] * gg[0] - gg[p0] * gf[0];
  for (std::size_t i = 0; i < n; ++i)
    acc += gf[p0 + 1 + i] * gg[1 + i] - gg[p0 + 1 + i] * gf[1 + i];
  return acc;
}

ScalarField extend_phase_field(const ScalarField& f, int n) {
  CoordFrame ext = CoordFrame::extended(n);
  const std::size_t nn = static_cast<std::size_t>(n);
  return ScalarField::from_fn(ext, [f, nn](auto xs) {
    using T = typename decltype(xs)::value_type;
    std::vector<T> phase;
    phase.reserve(1 + 2 * nn);
    for (std::size_t k = 0; k <= nn; ++k) phase.push_back(xs[k]);
    for (std::size_t k = 0; k < nn; ++k) phase.push_back(xs[2 + nn + k]);
    return f.eval<T>(std::span<const T>(phase));
  });
}

ScalarField homogeneous_field(const HamiltonianSystem& sys) {
  ScalarField hext = extend_phase_field(sys.H, sys.n);
  const std::size_t n = static_cast<std::size_t>(sys.n);
  return ScalarField::from_fn(CoordFrame::extended(sys.n), [hext, n](auto xs) {
    using T = typename decltype(xs)::value_type;
    return xs[1 + n] + hext.eval<T>(xs);
  });
}

namespace {

template <class T>
std::vector<T> invert_momenta(const LagrangianSystem& lsys, std::span<const T> tq,
                              std::span<const T> p, std::vector<T> qt,
                              const LegendreOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(lsys.n);
  std::vector<T> packed(1 + 2 * n);
  auto fill = [&](const std::vector<T>& qt_now) {
    for (std::size_t k = 0; k <= n; ++k) packed[k] = tq[k];
    for (std::size_t k = 0; k < n; ++k) packed[1 + n + k] = qt_now[k];
  };

  auto residual = [&](const std::vector<T>& qt_now, std::vector<T>& f_out) {
    fill(qt_now);
    std::vector<T> pi = momenta_t<T>(lsys, packed);
    f_out.resize(n);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      f_out[k] = pi[k] - p[k];
      worst = std::max(worst, std::abs(value(f_out[k])));
    }
    return worst;
  };

  std::vector<T> f;
  double res = residual(qt, f);
  int polish = 0;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    if (res <= opt.tol && ++polish > 2) return qt;
    // Jacobian at the value level is enough for the Newton direction;
    // dual parts ride along through the residual.
    VecX xd(packed.size());
    for (std::size_t k = 0; k < packed.size(); ++k) xd[k] = value(packed[k]);
    MatX a = velocity_hessian(lsys, xd);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
      norm = std::max(norm, row);
    }
    double det = determinant(a);
    if (std::abs(det) < opt.regularity.rel_tol *
                            std::pow(std::max(1.0, norm), static_cast<double>(n)))
      throw SingularError("Legendre map has a singular velocity Hessian here");

    std::vector<T> delta = solve_values(a, f);
    double step = 1.0;
    for (int halving = 0; halving < 40; ++halving) {
      std::vector<T> trial(n);
      for (std::size_t k = 0; k < n; ++k) trial[k] = qt[k] - step * delta[k];
      std::vector<T> ftrial;
      double rtrial = residual(trial, ftrial);
      if (rtrial <= res || rtrial <= opt.tol) {
        qt = std::move(trial);
        f = std::move(ftrial);
        res = rtrial;
        break;
      }
      step *= 0.5;
      if (halving == 39)
        throw ConvergenceError("Legendre inversion stalled (residual " +
                                   std::to_string(res) + ")",
                               res);
    }
  }
  if (res <= opt.tol) return qt;
  throw ConvergenceError(
      "Legendre inversion did not converge (last residual " + std::to_string(res) + ")",
      res);
}

}  // namespace

JetPoint legendre_inverse(const LagrangianSystem& lsys, const PhasePoint& at,
                          VecX guess, const LegendreOptions& opt) {
  const std::size_t n = at.dim();
  std::vector<double> tq(1 + n);
  tq[0] = at.t;
  for (std::size_t k = 0; k < n; ++k) tq[1 + k] = at.q[k];
  VecX qt0 = guess.empty() ? at.p : guess;
  VecX qt = invert_momenta<double>(lsys, tq, at.p, qt0, opt);
  return JetPoint{at.t, at.q, qt};
}

HamiltonianSystem associated_hamiltonian(const LagrangianSystem& lsys) {
  HamiltonianSystem out;
  out.n = lsys.n;
  const std::size_t n = static_cast<std::size_t>(lsys.n);
  out.H = ScalarField::from_fn(CoordFrame::phase(lsys.n), [lsys, n](auto xs) {
    using T = typename decltype(xs)::value_type;
    std::span<const T> tq = xs.first(n + 1);
    std::span<const T> p = xs.subspan(n + 1, n);
    std::vector<T> qt0(p.begin(), p.end());
    std::vector<T> qt = invert_momenta<T>(lsys, tq, p, std::move(qt0), {});
    std::vector<T> packed(1 + 2 * n);
    for (std::size_t k = 0; k <= n; ++k) packed[k] = tq[k];
    for (std::size_t k = 0; k < n; ++k) packed[1 + n + k] = qt[k];
    T acc = -lsys.L.eval<T>(std::span<const T>(packed));
    for (std::size_t k = 0; k < n; ++k) acc = acc + p[k] * qt[k];
    return acc;
  });
  return out;
}

}  // namespace noether
