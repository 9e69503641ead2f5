#include "noether/kepler.hpp"

#include <cmath>

namespace noether {
namespace kepler {

namespace {

std::string sum_of_squares(const std::string& stem, int dim) {
  std::string s = "(";
  for (int i = 1; i <= dim; ++i) {
    if (i > 1) s += "+";
    s += stem + std::to_string(i) + "^2";
  }
  return s + ")";
}

std::string radius(int dim) { return "sqrt(" + sum_of_squares("q", dim) + ")"; }

// Building blocks over a packed 2-dof phase tuple (t, q1, q2, p1, p2).
template <class T>
struct Core {
  T r, h, m12, a1, a2, pq;
  explicit Core(std::span<const T> x) {
    const T &q1 = x[1], &q2 = x[2], &p1 = x[3], &p2 = x[4];
    T p2sum = p1 * p1 + p2 * p2;
    r = sqrt(q1 * q1 + q2 * q2);
    h = 0.5 * p2sum - 1.0 / r;
    m12 = q1 * p2 - q2 * p1;
    pq = p1 * q1 + p2 * q2;
    a1 = q1 * p2sum - p1 * pq - q1 / r;
    a2 = q2 * p2sum - p2 * pq - q2 / r;
  }
};

const CoordFrame& phase2() {
  static const CoordFrame f = CoordFrame::phase(2);
  return f;
}

}  // namespace

KeplerSystem kepler_system(int dim) {
  if (dim != 2 && dim != 3)
    throw UsageError("the Kepler pair is available for 2 or 3 degrees of freedom");
  KeplerSystem sys;
  sys.lag.n = dim;
  sys.lag.L = ScalarField::from_text(
      CoordFrame::jet(dim), "0.5*" + sum_of_squares("qt", dim) + " + 1/" + radius(dim));
  sys.ham.n = dim;
  sys.ham.H = ScalarField::from_text(
      CoordFrame::phase(dim), "0.5*" + sum_of_squares("p", dim) + " - 1/" + radius(dim));
  return sys;
}

KeplerInvariants invariants(const PhasePoint& at) {
  if (at.dim() != 2) throw UsageError("Kepler invariants expect a 2-dof phase point");
  VecX x = at.pack();
  double r = std::hypot(at.q[0], at.q[1]);
  if (!(r > 0.0)) throw DomainError("Kepler potential is singular at r = 0");
  Core<double> c{std::span<const double>(x)};
  KeplerInvariants inv;
  inv.H = c.h;
  inv.M12 = c.m12;
  inv.A1 = c.a1;
  inv.A2 = c.a2;
  inv.Msq = c.m12 * c.m12;
  inv.Asq = c.a1 * c.a1 + c.a2 * c.a2;
  inv.a = std::abs(1.0 / (2.0 * c.h));  // inf at the parabolic boundary
  inv.e = std::sqrt(inv.Asq);
  return inv;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::Minus: return "minus";
    case Region::Plus: return "plus";
    default: return "excluded";
  }
}

Region classify(const PhasePoint& at, double eps) {
  KeplerInvariants inv = invariants(at);
  if (std::abs(inv.M12) <= eps || std::abs(inv.H) <= eps) return Region::Excluded;
  return inv.H < 0.0 ? Region::Minus : Region::Plus;
}

namespace {

Region require_region(const PhasePoint& at, double eps) {
  Region r = classify(at, eps);
  if (r == Region::Excluded) {
    KeplerInvariants inv = invariants(at);
    throw ChartError("point is in the excluded region (H = " + std::to_string(inv.H) +
                     ", M12 = " + std::to_string(inv.M12) + ")");
  }
  return r;
}

}  // namespace

ScaledIntegrals scaled_integrals(const PhasePoint& at, double eps) {
  Region r = require_region(at, eps);
  KeplerInvariants inv = invariants(at);
  double s = std::sqrt(std::abs(2.0 * inv.H));
  return ScaledIntegrals{r, inv.A1 / s, inv.A2 / s};
}

MomentumMap momentum_map(const PhasePoint& at, double eps) {
  ScaledIntegrals s = scaled_integrals(at, eps);
  KeplerInvariants inv = invariants(at);
  return MomentumMap{s.region, -s.s1, -s.s2, -inv.M12};
}

ScalarField phase_integral(const std::string& name) {
  const std::string r2 = "sqrt(q1^2+q2^2)";
  if (name == "H")
    return ScalarField::from_text(phase2(), "0.5*(p1^2+p2^2) - 1/" + r2);
  if (name == "M12") return ScalarField::from_text(phase2(), "q1*p2 - q2*p1");
  if (name == "A1")
    return ScalarField::from_text(
        phase2(), "q1*(p1^2+p2^2) - p1*(p1*q1+p2*q2) - q1/" + r2);
  if (name == "A2")
    return ScalarField::from_text(
        phase2(), "q2*(p1^2+p2^2) - p2*(p1*q1+p2*q2) - q2/" + r2);
  if (name == "L1" || name == "L2" || name == "K1" || name == "K2") {
    const bool bound = name[0] == 'L';
    const bool first = name[1] == '1';
    return ScalarField::from_fn(phase2(), [bound, first](auto xs) {
      using T = typename decltype(xs)::value_type;
      Core<T> c{xs};
      T scale = bound ? sqrt(-2.0 * c.h) : sqrt(2.0 * c.h);
      return (first ? c.a1 : c.a2) / scale;
    });
  }
  if (name == "gamma") {
    return ScalarField::from_fn(phase2(), [](auto xs) {
      using T = typename decltype(xs)::value_type;
      Core<T> c{xs};
      T s = sqrt(-2.0 * c.h);
      return atan2(-c.a2 / s, -c.m12);  // atan2(x2, x3)
    });
  }
  if (name == "lambda") {
    return ScalarField::from_fn(phase2(), [](auto xs) {
      using T = typename decltype(xs)::value_type;
      Core<T> c{xs};
      T s = sqrt(2.0 * c.h);
      T x2 = -c.a2 / s;
      T x3 = -c.m12;
      if (!(value(x2) > 0.0)) throw ChartError("chart requires x2 > 0");
      return 0.5 * log((x2 + x3) / (x2 - x3));  // artanh(x3/x2)
    });
  }
  throw UsageError("unknown Kepler integral '" + name + "'");
}

ScalarField jet_monitor(const std::string& name, int dim) {
  const CoordFrame frame = CoordFrame::jet(dim);
  const std::string r = radius(dim);
  if (name == "H")
    return ScalarField::from_text(frame, "0.5*" + sum_of_squares("qt", dim) + " - 1/" + r);
  if (name.size() == 3 && name[0] == 'M') {
    int a = name[1] - '0', b = name[2] - '0';
    if (a >= 1 && b > a && b <= dim) {
      std::string qa = "q" + std::to_string(a), qb = "q" + std::to_string(b);
      std::string ta = "qt" + std::to_string(a), tb = "qt" + std::to_string(b);
      return ScalarField::from_text(frame, qa + "*" + tb + " - " + qb + "*" + ta);
    }
  }
  if (name.size() == 2 && name[0] == 'A') {
    int a = name[1] - '0';
    if (a >= 1 && a <= dim) {
      std::string qa = "q" + std::to_string(a), ta = "qt" + std::to_string(a);
      std::string s;
      for (int b = 1; b <= dim; ++b) {
        if (b == a) continue;
        std::string qb = "q" + std::to_string(b), tb = "qt" + std::to_string(b);
        if (!s.empty()) s += " + ";
        s += "(" + qa + "*" + tb + " - " + qb + "*" + ta + ")*" + tb;
      }
      return ScalarField::from_text(frame, s + " - " + qa + "/" + r);
    }
  }
  throw UsageError("unknown Kepler monitor '" + name + "' for dim " +
                   std::to_string(dim));
}

VectorFieldQ rotation_generator(int dim, int a, int b) {
  if (a < 1 || b < 1 || a == b || a > dim || b > dim)
    throw UsageError("rotation generator indices out of range");
  CoordFrame cfg = CoordFrame::config(dim);
  VectorFieldQ v;
  v.ut = 0;
  for (int i = 1; i <= dim; ++i) {
    if (i == a)
      v.u.push_back(ScalarField::from_text(cfg, "q" + std::to_string(b)));
    else if (i == b)
      v.u.push_back(ScalarField::from_text(cfg, "-q" + std::to_string(a)));
    else
      v.u.push_back(ScalarField::zero(cfg));
  }
  return v;
}

VectorFieldV runge_lenz_symmetry(int index) {
  if (index != 1 && index != 2)
    throw UsageError("eccentricity-vector symmetry index must be 1 or 2");
  const std::size_t a = static_cast<std::size_t>(index - 1);
  VectorFieldV v;
  v.ut = 0;
  // u^i = delta_{ia} (p,q) + q^i p_a - 2 q^a p_i
  // l_i = delta_{ia} p^2 - p_a p_i - delta_{ia}/r + q^a q_i / r^3
  for (std::size_t i = 0; i < 2; ++i) {
    v.u.push_back(ScalarField::from_fn(phase2(), [a, i](auto xs) {
      using T = typename decltype(xs)::value_type;
      const T &qi = xs[1 + i], &qa = xs[1 + a], &pi = xs[3 + i], &pa = xs[3 + a];
      T pq = xs[1] * xs[3] + xs[2] * xs[4];
      T acc = qi * pa - 2.0 * qa * pi;
      if (i == a) acc = acc + pq;
      return acc;
    }));
    v.l.push_back(ScalarField::from_fn(phase2(), [a, i](auto xs) {
      using T = typename decltype(xs)::value_type;
      const T &qi = xs[1 + i], &qa = xs[1 + a], &pi = xs[3 + i], &pa = xs[3 + a];
      T r = sqrt(xs[1] * xs[1] + xs[2] * xs[2]);
      T acc = qa * qi / (r * r * r) - pa * pi;
      if (i == a) acc = acc + xs[3] * xs[3] + xs[4] * xs[4] - 1.0 / r;
      return acc;
    }));
  }
  return v;
}

StructureResiduals structure_residuals(const PhasePoint& at, double eps) {
  Region region = require_region(at, eps);
  KeplerInvariants inv = invariants(at);
  ScalarField m12 = phase_integral("M12");
  ScalarField a1f = phase_integral("A1");
  ScalarField a2f = phase_integral("A2");
  const bool bound = region == Region::Minus;
  ScalarField s1f = phase_integral(bound ? "L1" : "K1");
  ScalarField s2f = phase_integral(bound ? "L2" : "K2");
  ScaledIntegrals sc = scaled_integrals(at, eps);

  StructureResiduals out;
  out.region = region;
  auto push = [&](std::string label, double value) {
    out.labels.push_back(std::move(label));
    out.residuals.push_back(value);
  };
  const std::string S = bound ? "L" : "K";
  push("{M12," + S + "1}+" + S + "2",
       poisson_bracket_V(m12, s1f, at) + sc.s2);
  push("{M12," + S + "2}-" + S + "1",
       poisson_bracket_V(m12, s2f, at) - sc.s1);
  push("{" + S + "1," + S + "2}" + (bound ? "+M12" : "-M12"),
       poisson_bracket_V(s1f, s2f, at) + (bound ? inv.M12 : -inv.M12));
  push("{M12,A1}+A2", poisson_bracket_V(m12, a1f, at) + inv.A2);
  push("{M12,A2}-A1", poisson_bracket_V(m12, a2f, at) - inv.A1);
  push("{A1,A2}-2*H*M12",
       poisson_bracket_V(a1f, a2f, at) - 2.0 * inv.H * inv.M12);
  return out;
}

double StructureResiduals::max_abs() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, std::abs(r));
  return m;
}

double casimir_residual(const PhasePoint& at, double eps) {
  Region region = require_region(at, eps);
  KeplerInvariants inv = invariants(at);
  ScaledIntegrals s = scaled_integrals(at, eps);
  double ssq = s.s1 * s.s1 + s.s2 * s.s2;
  double inv2h = 1.0 / (2.0 * inv.H);
  double raw, scale;
  if (region == Region::Minus) {
    raw = inv.Msq + ssq + inv2h;
    scale = 1.0 + inv.Msq + ssq + std::abs(inv2h);
  } else {
    raw = ssq - inv.Msq - inv2h;
    scale = 1.0 + ssq + inv.Msq + std::abs(inv2h);
  }
  return raw / scale;
}

namespace {

// Safeguarded Newton for g(E) = 0 on [lo, hi] with g(lo), g(hi) of opposite
// sign; `seed` is assumed close to the root already.
template <class G, class DG>
double polish_root(G&& g, DG&& dg, double lo, double hi, double seed, double tol) {
  double glo = g(lo);
  double e = std::clamp(seed, lo, hi);
  for (int it = 0; it < 80; ++it) {
    double ge = g(e);
    if (std::abs(ge) <= tol) return e;
    if ((ge < 0.0) == (glo < 0.0)) lo = e; else hi = e;
    double de = dg(e);
    double step = de != 0.0 ? ge / de : 0.0;
    double next = e - step;
    if (!(next > std::min(lo, hi)) || !(next < std::max(lo, hi)) || step == 0.0)
      next = 0.5 * (lo + hi);
    if (next == e) return e;
    e = next;
  }
  return e;
}

}  // namespace

ActionAngleState action_angle(const PhasePoint& at, double eps) {
  Region region = require_region(at, eps);
  KeplerInvariants inv = invariants(at);
  MomentumMap mm = momentum_map(at, eps);
  const double r = std::hypot(at.q[0], at.q[1]);
  const double pq = at.p[0] * at.q[0] + at.p[1] * at.q[1];

  ActionAngleState st;
  st.region = region;
  st.x1 = mm.x1;

  if (region == Region::Minus) {
    double csum = mm.x1 * mm.x1 + mm.x2 * mm.x2 + mm.x3 * mm.x3;
    st.I = -0.5 / csum;
    if (!(mm.x2 * mm.x2 + mm.x3 * mm.x3 > 0.0))
      throw ChartError("chart requires x2^2 + x3^2 > 0");
    st.angle = std::atan2(mm.x2, mm.x3);
    const double a = -1.0 / (2.0 * st.I);
    const double e = std::sqrt(std::max(0.0, 1.0 + 2.0 * st.I * inv.Msq));
    st.period = 2.0 * M_PI * std::pow(a, 1.5);
    double E;
    if (e < 1e-12) {
      // Degenerate circle: any origin works; take the polar angle of q.
      E = std::atan2(at.q[1], at.q[0]);
      if (E < 0.0) E += 2.0 * M_PI;
    } else {
      // Seed from the joint (radius, radial momentum) form, which stays
      // well-conditioned at the apsides, then polish the radius equation.
      E = std::atan2(pq / std::sqrt(a), (1.0 - r / a));
      if (E < 0.0) E += 2.0 * M_PI;
      double lo = pq >= 0.0 ? 0.0 : M_PI;
      double hi = lo + M_PI;
      E = polish_root([&](double x) { return a * (1.0 - e * std::cos(x)) - r; },
                      [&](double x) { return a * e * std::sin(x); }, lo, hi, E,
                      1e-13 * std::max(1.0, r));
    }
    st.anomaly = E;
    st.cyclic = std::pow(a, 1.5) * (E - e * std::sin(E));
    return st;
  }

  // Plus region: lambda chart needs the x2 > 0 sheet.
  if (!(mm.x2 > 0.0)) throw ChartError("chart requires x2 > 0");
  double rsq = mm.x2 * mm.x2 - mm.x3 * mm.x3;
  if (!(rsq > 0.0)) throw ChartError("chart requires x2^2 - x3^2 > 0");
  st.I = 0.5 / (mm.x1 * mm.x1 + rsq);
  st.angle = std::atanh(mm.x3 / mm.x2);
  const double a = 1.0 / (2.0 * st.I);
  const double e = std::sqrt(1.0 + 2.0 * st.I * inv.Msq);
  // The chart parameter runs against the standard anomaly so that the
  // cyclic coordinate advances with time.
  double E = std::asinh(-pq / (std::sqrt(a) * e));
  double lo = pq >= 0.0 ? -60.0 : 0.0;
  double hi = lo + 60.0;
  E = polish_root([&](double x) { return a * (e * std::cosh(x) - 1.0) - r; },
                  [&](double x) { return a * e * std::sinh(x); }, lo, hi, E,
                  1e-13 * std::max(1.0, r));
  if ((pq >= 0.0) != (E <= 0.0)) E = -E;  // keep the chosen orientation
  st.anomaly = E;
  st.cyclic = std::pow(a, 1.5) * (E - e * std::sinh(E));
  return st;
}

double bivector_residual(const PhasePoint& at, double eps, double fd_step) {
  Region region = require_region(at, eps);
  ActionAngleState center = action_angle(at, eps);
  const double period = center.period.value_or(0.0);

  // Central-difference Jacobian of the chart map over z = (q1, q2, p1, p2).
  double g[4][4];
  for (int c = 0; c < 4; ++c) {
    PhasePoint zp = at, zm = at;
    double* slotp = c < 2 ? &zp.q[c] : &zp.p[c - 2];
    double* slotm = c < 2 ? &zm.q[c] : &zm.p[c - 2];
    const double h = fd_step * (1.0 + std::abs(*slotp));
    *slotp += h;
    *slotm -= h;
    ActionAngleState sp = action_angle(zp, eps);
    ActionAngleState sm = action_angle(zm, eps);
    if (sp.region != region || sm.region != region)
      throw ChartError("finite-difference probe left the region");
    auto wrap = [](double d, double p) { return p > 0.0 ? std::remainder(d, p) : d; };
    g[0][c] = (sp.I - sm.I) / (2.0 * h);
    g[1][c] = (sp.x1 - sm.x1) / (2.0 * h);
    double dangle = sp.angle - sm.angle;
    if (region == Region::Minus) dangle = wrap(dangle, 2.0 * M_PI);
    g[2][c] = dangle / (2.0 * h);
    double dcyc = sp.cyclic - sm.cyclic;
    if (region == Region::Minus) dcyc = wrap(dcyc, period);
    g[3][c] = dcyc / (2.0 * h);
  }

  // Canonical bracket matrix of (q1, q2, p1, p2): {q_i, p_j} = -delta_ij.
  double J[4][4] = {{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  double B[4][4] = {};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double acc = 0.0;
      for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v) acc += g[a][u] * J[u][v] * g[b][v];
      B[a][b] = acc;
    }

  // Expected block form in chart order (I, x1, angle, cyclic).
  double E[4][4] = {};
  E[0][3] = 1.0;
  E[3][0] = -1.0;
  if (region == Region::Minus) {
    E[1][2] = 1.0;  // {x1, gamma} = 1
    E[2][1] = -1.0;
  } else {
    E[2][1] = 1.0;  // {lambda, x1} = 1
    E[1][2] = -1.0;
  }
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) worst = std::max(worst, std::abs(B[a][b] - E[a][b]));
  return worst;
}

LagrangianKeplerReport lagrangian_kepler_checks(int dim, const Jet2Point& at) {
  KeplerSystem sys = kepler_system(dim);
  double rsq = 0.0;
  for (double qi : at.q) rsq += qi * qi;
  if (!(rsq > 0.0)) throw DomainError("Kepler potential is singular at r = 0");

  LagrangianKeplerReport rep;
  ScalarField nosigma;
  JetPoint jp = at.jet();
  VecX x = jp.pack();
  for (int a = 1; a <= dim; ++a) {
    for (int b = a + 1; b <= dim; ++b) {
      VectorFieldQ v = rotation_generator(dim, a, b);
      rep.max_symmetry_residual = std::max(
          rep.max_symmetry_residual, std::abs(symmetry_residual(sys.lag, v, nosigma, at)));
      double cur = noether_current(sys.lag, v, jp);
      double mab = at.q[a - 1] * at.qt[b - 1] - at.q[b - 1] * at.qt[a - 1];
      rep.max_current_mismatch = std::max(rep.max_current_mismatch, std::abs(cur - mab));
    }
  }

  VecX qtt = lagrange_dynamics(sys.lag, jp);
  for (int a = 1; a <= dim; ++a) {
    ScalarField A = jet_monitor("A" + std::to_string(a), dim);
    VecX gr = grad(A, x);
    double dt = gr[0];
    for (std::size_t j = 0; j < at.dim(); ++j)
      dt += at.qt[j] * gr[1 + j] + qtt[j] * gr[1 + at.dim() + j];
    rep.max_onshell_derivative = std::max(rep.max_onshell_derivative, std::abs(dt));
  }
  return rep;
}

double LagrangianKeplerReport::max_abs() const {
  return std::max({max_symmetry_residual, max_current_mismatch, max_onshell_derivative});
}

}  // namespace kepler
}  // namespace noether
