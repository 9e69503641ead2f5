#include "noether/geometry.hpp"

namespace noether {

namespace {

VecX pack_blocks(double t, std::initializer_list<const VecX*> blocks) {
  VecX out;
  std::size_t n = 1;
  for (const VecX* b : blocks) n += b->size();
  out.reserve(n);
  out.push_back(t);
  for (const VecX* b : blocks) out.insert(out.end(), b->begin(), b->end());
  return out;
}

}  // namespace

VecX JetPoint::pack() const { return pack_blocks(t, {&q, &qt}); }
VecX Jet2Point::pack() const { return pack_blocks(t, {&q, &qt}); }
VecX PhasePoint::pack() const { return pack_blocks(t, {&q, &p}); }

VecX ExtendedPhasePoint::pack() const {
  VecX out;
  out.reserve(2 + q.size() + p.size());
  out.push_back(t);
  out.insert(out.end(), q.begin(), q.end());
  out.push_back(p0);
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

ReferenceFrame ReferenceFrame::rest(int n) {
  ReferenceFrame f;
  for (int i = 0; i < n; ++i) f.g.push_back(ScalarField::zero(CoordFrame::config(n)));
  return f;
}

JetProlongation jet_prolong(const VectorFieldQ& v, const Jet2Point& at) {
  const std::size_t n = v.dim();
  VecX tq;
  tq.reserve(n + 1);
  tq.push_back(at.t);
  tq.insert(tq.end(), at.q.begin(), at.q.end());

  JetProlongation out;
  out.ut = v.ut;
  out.u.resize(n);
  out.dtu.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    VecX g = grad(v.u[i], tq);
    out.u[i] = v.u[i].value(tq);
    double dt = g[0];
    for (std::size_t j = 0; j < n; ++j) dt += at.qt[j] * g[1 + j];
    out.dtu[i] = dt;
  }
  return out;
}

LiftValues canonical_lift(const VectorFieldQ& v, const PhasePoint& at) {
  const std::size_t n = v.dim();
  VecX tq;
  tq.reserve(n + 1);
  tq.push_back(at.t);
  tq.insert(tq.end(), at.q.begin(), at.q.end());

  LiftValues out;
  out.ut = v.ut;
  out.u.resize(n);
  out.l.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    VecX g = grad(v.u[j], tq);
    out.u[j] = v.u[j].value(tq);
    for (std::size_t i = 0; i < n; ++i) out.l[i] -= at.p[j] * g[1 + i];
  }
  return out;
}

VectorFieldV lift_to_phase(const VectorFieldQ& v) {
  const std::size_t n = v.dim();
  CoordFrame phase = CoordFrame::phase(static_cast<int>(n));

  VectorFieldV out;
  out.ut = v.ut;
  for (std::size_t i = 0; i < n; ++i) {
    ScalarField ui = v.u[i];
    out.u.push_back(ScalarField::from_fn(phase, [ui, n](auto x) {
      using T = typename decltype(x)::value_type;
      return ui.template eval<T>(x.first(n + 1));
    }));
  }
  // l_i = -p_j du^j/dq^i, via an inner dual layer over (t, q).
  std::vector<ScalarField> us = v.u;
  for (std::size_t i = 0; i < n; ++i) {
    out.l.push_back(ScalarField::from_fn(phase, [us, n, i](auto x) {
      using T = typename decltype(x)::value_type;
      T acc(0.0);
      for (std::size_t j = 0; j < n; ++j) {
        auto vg = value_and_grad<T>(us[j], x.first(n + 1));
        acc = acc - x[n + 1 + j] * vg.grad[1 + i];
      }
      return acc;
    }));
  }
  return out;
}

VecX relative_velocity(const ReferenceFrame& g, const JetPoint& at) {
  const std::size_t n = g.dim();
  VecX tq;
  tq.reserve(n + 1);
  tq.push_back(at.t);
  tq.insert(tq.end(), at.q.begin(), at.q.end());
  VecX out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = at.qt[i] - g.g[i].value(tq);
  return out;
}

}  // namespace noether
