#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "noether/dual.hpp"
#include "noether/errors.hpp"

namespace noether {

/// Dense row-major square matrix, just big enough for the few-dof systems
/// handled here.
template <class T>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<T> a;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : n(dim), a(dim * dim, T{}) {}

  T& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

using MatX = SquareMatrix<double>;

namespace detail {

// In-place LU with partial pivoting (pivot chosen on |value|, so the same
// code serves dual-number matrices). Returns the permutation sign, or 0 if
// a pivot column is exactly zero.
template <class T>
int lu_decompose(SquareMatrix<T>& m, std::vector<std::size_t>& perm) {
  const std::size_t n = m.n;
  perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(value(m(col, col)));
    for (std::size_t r = col + 1; r < n; ++r) {
      double cand = std::abs(value(m(r, col)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      std::swap(perm[piv], perm[col]);
      sign = -sign;
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      T f = m(r, col) / m(col, col);
      m(r, col) = f;
      for (std::size_t j = col + 1; j < n; ++j)
        m(r, j) = m(r, j) - f * m(col, j);
    }
  }
  return sign;
}

}  // namespace detail

template <class T>
T determinant(SquareMatrix<T> m) {
  std::vector<std::size_t> perm;
  int sign = detail::lu_decompose(m, perm);
  if (sign == 0) return T(0.0);
  T det(static_cast<double>(sign));
  for (std::size_t i = 0; i < m.n; ++i) det = det * m(i, i);
  return det;
}

/// Solve m x = b. Throws SingularError when a pivot vanishes.
template <class T>
std::vector<T> solve(SquareMatrix<T> m, std::vector<T> b) {
  const std::size_t n = m.n;
  std::vector<std::size_t> perm;
  if (detail::lu_decompose(m, perm) == 0)
    throw SingularError("singular linear system");
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] = x[i] - m(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] = x[i] - m(i, j) * x[j];
    x[i] = x[i] / m(i, i);
  }
  return x;
}

/// Solve m x = b where the matrix is plain double but the right-hand side
/// carries dual numbers; the substitution arithmetic propagates derivatives.
template <class T>
std::vector<T> solve_values(MatX m, std::vector<T> b) {
  const std::size_t n = m.n;
  std::vector<std::size_t> perm;
  if (detail::lu_decompose(m, perm) == 0)
    throw SingularError("singular linear system");
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] = x[i] - m(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] = x[i] - m(i, j) * x[j];
    x[i] = x[i] / m(i, i);
  }
  return x;
}

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace noether
