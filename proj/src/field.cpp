#include "noether/field.hpp"

namespace noether {

CoordFrame CoordFrame::config(int n) {
  CoordFrame f;
  f.names.push_back("t");
  for (int i = 1; i <= n; ++i) f.names.push_back("q" + std::to_string(i));
  return f;
}

CoordFrame CoordFrame::jet(int n) {
  CoordFrame f = config(n);
  for (int i = 1; i <= n; ++i) f.names.push_back("qt" + std::to_string(i));
  return f;
}

CoordFrame CoordFrame::phase(int n) {
  CoordFrame f = config(n);
  for (int i = 1; i <= n; ++i) f.names.push_back("p" + std::to_string(i));
  return f;
}

CoordFrame CoordFrame::extended(int n) {
  CoordFrame f = config(n);
  f.names.push_back("p0");
  for (int i = 1; i <= n; ++i) f.names.push_back("p" + std::to_string(i));
  return f;
}

bool operator==(const CoordFrame& a, const CoordFrame& b) {
  return a.names == b.names;
}

ScalarField ScalarField::from_expr(CoordFrame frame, Expr::Ptr e,
                                   const std::map<std::string, double>& params) {
  ScalarField f;
  CompiledExpr code(std::move(e), frame.names, params);
  f.frame_ = std::move(frame);
  f.body_ = std::make_shared<detail::ExprBody>(std::move(code));
  return f;
}

ScalarField ScalarField::from_text(CoordFrame frame, std::string_view text,
                                   const std::map<std::string, double>& params) {
  return from_expr(std::move(frame), parse_expression(text), params);
}

ScalarField ScalarField::zero(CoordFrame frame) { return constant(std::move(frame), 0.0); }

ScalarField ScalarField::constant(CoordFrame frame, double c) {
  return from_expr(std::move(frame), Expr::number(c));
}

std::string ScalarField::describe() const {
  if (!body_) return "<empty>";
  if (auto* eb = dynamic_cast<const detail::ExprBody*>(body_.get()))
    return to_string(eb->code.root());
  return "<built-in>";
}

std::vector<D1> seed1(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<D1> xs(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i].v = x[i];
    xs[i].d.assign(m, 0.0);
    xs[i].d[i] = 1.0;
  }
  return xs;
}

std::vector<D2> seed2(std::span<const double> x) {
  const std::size_t m = x.size();
  std::vector<D2> xs(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i].v.v = x[i];
    xs[i].v.d.assign(m, 0.0);
    xs[i].v.d[i] = 1.0;
    xs[i].d.assign(m, D1(0.0));
    xs[i].d[i] = D1(1.0);
  }
  return xs;
}

std::vector<double> grad(const ScalarField& f, std::span<const double> at) {
  std::vector<D1> xs = seed1(at);
  D1 r = f.eval<D1>(xs);
  r.d.resize(at.size(), 0.0);
  return r.d;
}

std::vector<double> fd_gradient_oracle(const ScalarField& f,
                                       std::span<const double> at, double h) {
  if (!(h > 0.0)) throw UsageError("finite-difference step must be positive");
  std::vector<double> x(at.begin(), at.end());
  std::vector<double> g(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double hi = h * (1.0 + std::abs(at[i]));
    x[i] = at[i] + hi;
    double fp = f.value(x);
    x[i] = at[i] - hi;
    double fm = f.value(x);
    x[i] = at[i];
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

std::vector<std::vector<double>> jacobian(std::span<const ScalarField> fields,
                                          std::span<const double> at) {
  std::vector<std::vector<double>> rows;
  rows.reserve(fields.size());
  for (const ScalarField& f : fields) {
    if (!fields.empty() && !(f.frame() == fields[0].frame()))
      throw UsageError("jacobian requires all fields on one frame");
    rows.push_back(grad(f, at));
  }
  return rows;
}

SecondOrderValue hessian(const ScalarField& f, std::span<const double> at) {
  const std::size_t m = at.size();
  std::vector<D2> xs = seed2(at);
  D2 r = f.eval<D2>(xs);
  SecondOrderValue out;
  out.value = r.v.v;
  out.grad.assign(m, 0.0);
  r.v.d.resize(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) out.grad[i] = r.v.d[i];
  out.hess = MatX(m);
  r.d.resize(m, D1(0.0));
  for (std::size_t j = 0; j < m; ++j) {
    r.d[j].d.resize(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) out.hess(j, i) = r.d[j].d[i];
  }
  return out;
}

}  // namespace noether
