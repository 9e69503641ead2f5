#include "noether/lagrangian.hpp"

#include <cmath>

namespace noether {

namespace {

// Generic current term pi_i (u^i - ut qt^i) + ut L over a packed jet tuple.
template <class T>
T current_term(const LagrangianSystem& sys, const VectorFieldQ& v,
               std::span<const T> x) {
  const std::size_t n = static_cast<std::size_t>(sys.n);
  std::vector<T> pi = momenta_t<T>(sys, x);
  std::vector<T> u = detail::eval_config_fields<T>(v.u, x, n);
  T acc(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    T rel = u[i] - static_cast<double>(v.ut) * x[1 + n + i];
    acc = acc + pi[i] * rel;
  }
  if (v.ut) acc = acc + sys.L.eval<T>(x);
  return acc;
}

VecX eval_force(const LagrangianSystem& sys, std::span<const double> packed) {
  VecX f(static_cast<std::size_t>(sys.n), 0.0);
  for (std::size_t i = 0; i < sys.force.size(); ++i)
    f[i] = sys.force[i].value(packed);
  return f;
}

// d_t of a jet-frame function g at a second-jet point:
// d_t g = d_t + qt^j d_j + qtt^j d^t_j applied to g.
double total_derivative(const ScalarField& g, const Jet2Point& at) {
  VecX x = at.pack();
  VecX gr = grad(g, x);
  const std::size_t n = at.dim();
  double dt = gr[0];
  for (std::size_t j = 0; j < n; ++j)
    dt += at.qt[j] * gr[1 + j] + at.qtt[j] * gr[1 + n + j];
  return dt;
}

}  // namespace

VecX momenta(const LagrangianSystem& sys, const JetPoint& at) {
  VecX x = at.pack();
  return momenta_t<double>(sys, x);
}

MatX velocity_hessian(const LagrangianSystem& sys, std::span<const double> jet_packed) {
  SecondOrderValue so = hessian(sys.L, jet_packed);
  const std::size_t n = static_cast<std::size_t>(sys.n);
  MatX a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = so.hess(1 + n + i, 1 + n + j);
  return a;
}

namespace {

VecX lagrange_operator_impl(const LagrangianSystem& sys, const Jet2Point& at) {
  VecX x = at.pack();
  SecondOrderValue so = hessian(sys.L, x);
  const std::size_t n = at.dim();
  VecX eps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t qi = 1 + i, qti = 1 + n + i;
    double dtpi = so.hess(qti, 0);
    for (std::size_t j = 0; j < n; ++j)
      dtpi += at.qt[j] * so.hess(qti, 1 + j) + at.qtt[j] * so.hess(qti, 1 + n + j);
    eps[i] = so.grad[qi] - dtpi;
  }
  return eps;
}

}  // namespace

VecX lagrange_operator(const LagrangianSystem& sys, const Jet2Point& at) {
  return lagrange_operator_impl(sys, at);
}

VecX el_residual(const LagrangianSystem& sys, const Jet2Point& at) {
  VecX eps = lagrange_operator_impl(sys, at);
  if (sys.has_force()) {
    VecX x = at.pack();
    VecX f = eval_force(sys, x);
    for (std::size_t i = 0; i < eps.size(); ++i) eps[i] += f[i];
  }
  return eps;
}

double regularity(const LagrangianSystem& sys, const JetPoint& at) {
  VecX x = at.pack();
  return determinant(velocity_hessian(sys, x));
}

VecX lagrange_dynamics(const LagrangianSystem& sys, const JetPoint& at,
                       const RegularityConfig& cfg) {
  VecX x = at.pack();
  SecondOrderValue so = hessian(sys.L, x);
  const std::size_t n = at.dim();
  MatX a(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = so.hess(1 + n + i, 1 + n + j);
      row += std::abs(a(i, j));
    }
    norm = std::max(norm, row);
  }
  double det = determinant(a);
  double scale = std::pow(std::max(1.0, norm), static_cast<double>(n));
  if (std::abs(det) < cfg.rel_tol * scale)
    throw SingularError("velocity Hessian is singular here (det = " +
                        std::to_string(det) + ")");

  VecX b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t qti = 1 + n + i;
    double rhs = so.grad[1 + i] - so.hess(qti, 0);
    for (std::size_t j = 0; j < n; ++j) rhs -= at.qt[j] * so.hess(qti, 1 + j);
    b[i] = rhs;
  }
  if (sys.has_force()) {
    VecX f = eval_force(sys, x);
    for (std::size_t i = 0; i < n; ++i) b[i] += f[i];
  }
  return solve(a, b);
}

double lie_derivative_L(const LagrangianSystem& sys, const VectorFieldQ& v,
                        const Jet2Point& at) {
  VecX x = at.pack();
  VecX g = grad(sys.L, x);
  JetProlongation pr = jet_prolong(v, at);
  const std::size_t n = at.dim();
  double acc = pr.ut * g[0];
  for (std::size_t i = 0; i < n; ++i)
    acc += pr.u[i] * g[1 + i] + pr.dtu[i] * g[1 + n + i];
  return acc;
}

double variational_identity_residual(const LagrangianSystem& sys,
                                     const VectorFieldQ& v, const Jet2Point& at) {
  const std::size_t n = at.dim();
  double lhs = lie_derivative_L(sys, v, at);

  VecX eps = lagrange_operator_impl(sys, at);
  VecX x = at.pack();
  std::vector<double> uvals =
      detail::eval_config_fields<double>(v.u, std::span<const double>(x), n);

  ScalarField term = ScalarField::from_fn(
      sys.L.frame(), [sys, v](auto xs) {
        using T = typename decltype(xs)::value_type;
        return current_term<T>(sys, v, xs);
      });
  double dt_term = total_derivative(term, at);

  double rhs = dt_term;
  for (std::size_t i = 0; i < n; ++i)
    rhs += (uvals[i] - at.qt[i] * v.ut) * eps[i];
  return lhs - rhs;
}

double symmetry_residual(const LagrangianSystem& sys, const VectorFieldQ& v,
                         const ScalarField& sigma, const Jet2Point& at) {
  double lie = lie_derivative_L(sys, v, at);
  if (!sigma.valid()) return lie;
  return lie - total_derivative(sigma, at);
}

double symmetry_current(const LagrangianSystem& sys, const VectorFieldQ& v,
                        const ScalarField& sigma, const JetPoint& at) {
  VecX x = at.pack();
  double term = current_term<double>(sys, v, std::span<const double>(x));
  double s = sigma.valid() ? sigma.value(x) : 0.0;
  return -(term - s);
}

double noether_current(const LagrangianSystem& sys, const VectorFieldQ& v,
                       const JetPoint& at) {
  if (v.ut != 0)
    throw UsageError("noether_current requires a vertical field (ut = 0)");
  VecX x = at.pack();
  VecX pi = momenta_t<double>(sys, x);
  std::vector<double> u =
      detail::eval_config_fields<double>(v.u, std::span<const double>(x), at.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < at.dim(); ++i) acc += pi[i] * u[i];
  return -acc;
}

double energy_function(const LagrangianSystem& sys, const ReferenceFrame& g,
                       const JetPoint& at) {
  VecX x = at.pack();
  VecX pi = momenta_t<double>(sys, x);
  VecX rel = relative_velocity(g, at);
  double acc = -sys.L.value(x);
  for (std::size_t i = 0; i < at.dim(); ++i) acc += pi[i] * rel[i];
  return acc;
}

double frame_shift(const LagrangianSystem& sys, const ReferenceFrame& g1,
                   const ReferenceFrame& g2, const JetPoint& at) {
  VecX x = at.pack();
  VecX pi = momenta_t<double>(sys, x);
  double e1 = energy_function(sys, g1, at);
  double e2 = energy_function(sys, g2, at);
  // Noether current along the vertical difference field G1 - G2.
  VecX tq(x.begin(), x.begin() + 1 + at.dim());
  double j = 0.0;
  for (std::size_t i = 0; i < at.dim(); ++i)
    j -= pi[i] * (g1.g[i].value(tq) - g2.g[i].value(tq));
  return e1 - e2 - j;
}

ScalarField current_field(const LagrangianSystem& sys, const VectorFieldQ& v,
                          const ScalarField& sigma) {
  return ScalarField::from_fn(sys.L.frame(), [sys, v, sigma](auto xs) {
    using T = typename decltype(xs)::value_type;
    T term = current_term<T>(sys, v, xs);
    if (sigma.valid()) term = term - sigma.eval<T>(xs);
    return -term;
  });
}

ScalarField energy_field(const LagrangianSystem& sys, const ReferenceFrame& g) {
  return ScalarField::from_fn(sys.L.frame(), [sys, g](auto xs) {
    using T = typename decltype(xs)::value_type;
    const std::size_t n = static_cast<std::size_t>(sys.n);
    std::vector<T> pi = momenta_t<T>(sys, xs);
    std::vector<T> gi = detail::eval_config_fields<T>(g.g, xs, n);
    T acc = -sys.L.eval<T>(xs);
    for (std::size_t i = 0; i < n; ++i) acc = acc + pi[i] * (xs[1 + n + i] - gi[i]);
    return acc;
  });
}

}  // namespace noether
