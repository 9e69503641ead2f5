#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "noether/dual.hpp"
#include "noether/expr.hpp"
#include "noether/linalg.hpp"

namespace noether {

/// Ordered coordinate names a field is evaluated over.
struct CoordFrame {
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }
  int index(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }

  static CoordFrame config(int n);    // (t, q1..qn)
  static CoordFrame jet(int n);       // (t, q1..qn, qt1..qtn)
  static CoordFrame phase(int n);     // (t, q1..qn, p1..pn)
  static CoordFrame extended(int n);  // (t, q1..qn, p0, p1..pn)
};

bool operator==(const CoordFrame& a, const CoordFrame& b);

namespace detail {

struct FieldBody {
  virtual ~FieldBody() = default;
  virtual double eval0(std::span<const double>) const = 0;
  virtual D1 eval1(std::span<const D1>) const = 0;
  virtual D2 eval2(std::span<const D2>) const = 0;
};

template <class F>
struct CallableBody final : FieldBody {
  F fn;
  explicit CallableBody(F f) : fn(std::move(f)) {}
  double eval0(std::span<const double> x) const override { return fn(x); }
  D1 eval1(std::span<const D1> x) const override { return fn(x); }
  D2 eval2(std::span<const D2> x) const override { return fn(x); }
};

struct ExprBody final : FieldBody {
  CompiledExpr code;
  explicit ExprBody(CompiledExpr c) : code(std::move(c)) {}
  double eval0(std::span<const double> x) const override { return code.eval(x); }
  D1 eval1(std::span<const D1> x) const override { return code.eval(x); }
  D2 eval2(std::span<const D2> x) const override { return code.eval(x); }
};

}  // namespace detail

/// A differentiable real map over one coordinate frame, evaluable over plain
/// and dual scalars. Immutable; cheap to copy.
class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField from_expr(CoordFrame frame, Expr::Ptr e,
                               const std::map<std::string, double>& params = {});
  static ScalarField from_text(CoordFrame frame, std::string_view text,
                               const std::map<std::string, double>& params = {});

  /// Wrap a callable templated over the scalar: T fn(std::span<const T>).
  template <class F>
  static ScalarField from_fn(CoordFrame frame, F fn) {
    ScalarField f;
    f.frame_ = std::move(frame);
    f.body_ = std::make_shared<detail::CallableBody<F>>(std::move(fn));
    return f;
  }

  static ScalarField zero(CoordFrame frame);
  static ScalarField constant(CoordFrame frame, double c);

  const CoordFrame& frame() const { return frame_; }
  bool valid() const { return body_ != nullptr; }

  /// Source text when the field came from an expression, otherwise a tag.
  std::string describe() const;

  template <class T>
  T eval(std::span<const T> x) const {
    if (x.size() != frame_.size())
      throw UsageError("point dimension does not match the field's frame");
    if constexpr (std::is_same_v<T, double>) return body_->eval0(x);
    else if constexpr (std::is_same_v<T, D1>) return body_->eval1(x);
    else return body_->eval2(x);
  }

  double value(std::span<const double> x) const { return eval<double>(x); }

 private:
  CoordFrame frame_;
  std::shared_ptr<const detail::FieldBody> body_;
};

/// Full gradient in frame order from one dual-number sweep.
std::vector<double> grad(const ScalarField& f, std::span<const double> at);

/// Independent central-difference oracle, step h scaled by (1+|x_i|).
std::vector<double> fd_gradient_oracle(const ScalarField& f,
                                       std::span<const double> at,
                                       double h = 1e-6);

/// Rows are gradients of the given fields (all on one frame).
std::vector<std::vector<double>> jacobian(std::span<const ScalarField> fields,
                                          std::span<const double> at);

/// Value, gradient and Hessian from one nested-dual sweep.
struct SecondOrderValue {
  double value;
  std::vector<double> grad;
  MatX hess;
};
SecondOrderValue hessian(const ScalarField& f, std::span<const double> at);

/// Seed duals for a gradient sweep over x.
std::vector<D1> seed1(std::span<const double> x);
/// Seed nested duals for a Hessian sweep over x.
std::vector<D2> seed2(std::span<const double> x);

/// Derivative nesting is capped at two dual layers (third derivatives are
/// never needed here). Derived field bodies use InnerDual to add one layer
/// generically; at the cap the instantiation compiles but refuses to run.
template <class T>
struct InnerDual {
  using type = Dual<T>;
  static constexpr bool available = true;
};
template <>
struct InnerDual<D2> {
  using type = D2;  // placeholder, never used
  static constexpr bool available = false;
};

template <class T>
struct ValueAndGrad {
  T value;
  std::vector<T> grad;  // one slot per coordinate of x
};

/// Value and full gradient of f at a point with generic scalar entries,
/// obtained through one extra dual layer.
template <class T>
ValueAndGrad<T> value_and_grad(const ScalarField& f, std::span<const T> x) {
  if constexpr (!InnerDual<T>::available) {
    (void)f;
    (void)x;
    throw Error("derivative nesting deeper than two dual layers requested");
  } else {
    using DT = Dual<T>;
    const std::size_t m = x.size();
    std::vector<DT> xs(m);
    for (std::size_t i = 0; i < m; ++i) {
      xs[i].v = x[i];
      xs[i].d.assign(m, T(0.0));
      xs[i].d[i] = T(1.0);
    }
    DT r = f.eval<DT>(xs);
    r.d.resize(m, T(0.0));
    ValueAndGrad<T> out;
    out.value = std::move(r.v);
    out.grad = std::move(r.d);
    return out;
  }
}

}  // namespace noether
