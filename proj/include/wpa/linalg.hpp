#pragma once

// Small dense solvers for the Remez and IRLS systems (dimension <= ~64).

#include <vector>

#include "wpa/errors.hpp"
#include "wpa/num.hpp"

namespace wpa {

template <class R>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<R> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(size_t(r) * c, R(0)) {}
  R& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const R& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }

  std::vector<R> mul(const std::vector<R>& x) const {
    std::vector<R> y(rows, R(0));
    for (int i = 0; i < rows; ++i) {
      R s = 0;
      for (int j = 0; j < cols; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }
};

// Partial-pivot LU solve; A is overwritten. Returns false when singular.
template <class R>
bool lu_solve_inplace(Matrix<R>& A, std::vector<R>& b) {
  const int n = A.rows;
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    R best = num::fabs(A(k, k));
    for (int i = k + 1; i < n; ++i) {
      R v = num::fabs(A(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > R(0))) return false;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
      std::swap(b[k], b[p]);
    }
    for (int i = k + 1; i < n; ++i) {
      R f = A(i, k) / A(k, k);
      A(i, k) = f;
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    R s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  return true;
}

// Solve with one iterative-refinement pass; the residual is accumulated in
// long double when R is double, which keeps the coefficients near machine
// accuracy even for moderately conditioned Remez systems.
template <class R>
std::vector<R> lu_solve_refined(const Matrix<R>& A, const std::vector<R>& b) {
  Matrix<R> lu = A;
  std::vector<R> x = b;
  if (!lu_solve_inplace(lu, x)) throw Error("linalg", errc::non_convergence, "singular system");
  std::vector<R> r(b.size());
  if constexpr (std::is_same_v<R, double>) {
    for (int i = 0; i < A.rows; ++i) {
      long double s = b[i];
      for (int j = 0; j < A.cols; ++j) s -= (long double)A(i, j) * (long double)x[j];
      r[i] = (double)s;
    }
  } else {
    for (int i = 0; i < A.rows; ++i) {
      R s = b[i];
      for (int j = 0; j < A.cols; ++j) s -= A(i, j) * x[j];
      r[i] = s;
    }
  }
  Matrix<R> lu2 = A;
  if (lu_solve_inplace(lu2, r))
    for (size_t i = 0; i < x.size(); ++i) x[i] += r[i];
  return x;
}

// Cholesky solve for SPD normal equations.
template <class R>
std::vector<R> cholesky_solve(Matrix<R> A, std::vector<R> b) {
  const int n = A.rows;
  for (int k = 0; k < n; ++k) {
    R d = A(k, k);
    for (int j = 0; j < k; ++j) d -= A(k, j) * A(k, j);
    if (!(d > R(0))) throw Error("linalg", errc::non_convergence, "matrix not positive definite");
    d = num::sqrt(d);
    A(k, k) = d;
    for (int i = k + 1; i < n; ++i) {
      R s = A(i, k);
      for (int j = 0; j < k; ++j) s -= A(i, j) * A(k, j);
      A(i, k) = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    R s = b[i];
    for (int j = 0; j < i; ++j) s -= A(i, j) * b[j];
    b[i] = s / A(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    R s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(j, i) * b[j];
    b[i] = s / A(i, i);
  }
  return b;
}

}  // namespace wpa
