#pragma once

#include <span>
#include <vector>

#include "noether/field.hpp"

namespace noether {

using VecX = std::vector<double>;

/// Point of the velocity space: time, positions, absolute velocities.
struct JetPoint {
  double t = 0.0;
  VecX q, qt;

  std::size_t dim() const { return q.size(); }
  VecX pack() const;  // (t, q, qt) in jet-frame order
};

/// JetPoint extended with accelerations.
struct Jet2Point {
  double t = 0.0;
  VecX q, qt, qtt;

  std::size_t dim() const { return q.size(); }
  JetPoint jet() const { return {t, q, qt}; }
  VecX pack() const;  // (t, q, qt); accelerations ride along separately
};

/// Point of the phase space: time, positions, momenta.
struct PhasePoint {
  double t = 0.0;
  VecX q, p;

  std::size_t dim() const { return q.size(); }
  VecX pack() const;  // (t, q, p) in phase-frame order
};

/// PhasePoint with the temporal momentum slot.
struct ExtendedPhasePoint {
  double t = 0.0;
  VecX q;
  double p0 = 0.0;
  VecX p;

  std::size_t dim() const { return q.size(); }
  PhasePoint project() const { return {t, q, p}; }
  VecX pack() const;  // (t, q, p0, p)
};

/// Vector field on the configuration space: ut in {0,1} exactly, and n
/// position components over (t, q).
struct VectorFieldQ {
  int ut = 0;
  std::vector<ScalarField> u;

  std::size_t dim() const { return u.size(); }
};

/// Vector field on the phase space: position components u and lowered
/// momentum components l, all over (t, q, p).
struct VectorFieldV {
  int ut = 0;
  std::vector<ScalarField> u, l;

  std::size_t dim() const { return u.size(); }
};

/// Observer field: components of the connection over (t, q).
struct ReferenceFrame {
  std::vector<ScalarField> g;

  std::size_t dim() const { return g.size(); }
  static ReferenceFrame rest(int n);  // all components zero
};

/// Component values of the first jet prolongation at a point: ut, u^i, and
/// the total derivatives d_t u^i = (d/dt + qt^j d/dq^j) u^i.
struct JetProlongation {
  int ut = 0;
  VecX u, dtu;
};
JetProlongation jet_prolong(const VectorFieldQ& v, const Jet2Point& at);

/// Component values of the canonical lift at a phase point: the lowered
/// components are l_i = -p_j du^j/dq^i.
struct LiftValues {
  int ut = 0;
  VecX u, l;
};
LiftValues canonical_lift(const VectorFieldQ& v, const PhasePoint& at);

/// The canonical lift as a phase-space vector field (components become
/// derived fields, differentiable in turn).
VectorFieldV lift_to_phase(const VectorFieldQ& v);

/// qt^i - G^i(t, q).
VecX relative_velocity(const ReferenceFrame& g, const JetPoint& at);

namespace detail {

/// Evaluate configuration-space fields at the (t, q) prefix of a packed jet
/// or phase tuple, generically over the scalar type.
template <class T>
std::vector<T> eval_config_fields(std::span<const ScalarField> fields,
                                  std::span<const T> packed, std::size_t n) {
  std::span<const T> tq = packed.first(n + 1);
  std::vector<T> out;
  out.reserve(fields.size());
  for (const ScalarField& f : fields) out.push_back(f.eval<T>(tq));
  return out;
}

}  // namespace detail

}  // namespace noether
