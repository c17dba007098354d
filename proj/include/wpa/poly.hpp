#pragma once

// Polynomials in the coordinates of an OrthoBasis. All arithmetic stays in
// the p_k basis; derivatives and antiderivatives apply the cached matrices.

#include <vector>

#include "wpa/orthopoly.hpp"

namespace wpa {

template <class R>
struct Poly {
  std::vector<R> coeffs;  // coordinates in the p_k basis

  Poly() = default;
  explicit Poly(std::vector<R> c) : coeffs(std::move(c)) {}

  // Index of the last nonzero coordinate; -1 for the zero polynomial.
  int degree() const {
    for (int k = int(coeffs.size()) - 1; k >= 0; --k)
      if (coeffs[k] != R(0)) return k;
    return -1;
  }

  static Poly zero() { return Poly(); }
  static Poly constant(const OrthoBasis<R>& basis, R value) {
    // 1 = sqrt(beta_rec[0]) * p_0
    return Poly({value * num::sqrt(basis.beta_rec()[0])});
  }
};

template <class R>
R eval_poly(const OrthoBasis<R>& basis, const Poly<R>& P, R x) {
  if (P.coeffs.empty()) return R(0);
  std::vector<R> p(P.coeffs.size());
  basis.eval_all(x, p);
  R s = 0;
  for (size_t k = 0; k < p.size(); ++k) s += P.coeffs[k] * p[k];
  return s;
}

template <class R>
Poly<R> poly_derivative(const OrthoBasis<R>& basis, const Poly<R>& P, int k = 1) {
  if (k < 0) throw Error("bestapprox", errc::degree_out_of_range, "negative derivative order");
  Poly<R> out = P;
  const Matrix<R>& D = basis.dmat();
  for (int pass = 0; pass < k; ++pass) {
    if (out.coeffs.empty()) return Poly<R>::zero();
    if (int(out.coeffs.size()) - 1 > basis.nmax())
      throw Error("bestapprox", errc::degree_out_of_range, "degree exceeds basis nmax");
    std::vector<R> next(out.coeffs.size() > 1 ? out.coeffs.size() - 1 : 0, R(0));
    for (int i = 0; i < int(next.size()); ++i) {
      R s = 0;
      for (int j = i + 1; j < int(out.coeffs.size()); ++j) s += D(i, j) * out.coeffs[j];
      next[i] = s;
    }
    out.coeffs = std::move(next);
  }
  return out;
}

// x -> Int_0^x P; input degree must be <= nmax - 1.
template <class R>
Poly<R> poly_antiderivative(const OrthoBasis<R>& basis, const Poly<R>& P) {
  if (P.coeffs.empty()) return Poly<R>::zero();
  const int d = int(P.coeffs.size()) - 1;
  if (d > basis.nmax() - 1)
    throw Error("bestapprox", errc::degree_out_of_range,
                "antiderivative would exceed basis nmax");
  const Matrix<R>& A = basis.imat();
  Poly<R> out;
  out.coeffs.assign(d + 2, R(0));
  for (int j = 0; j <= d + 1; ++j) {
    R s = 0;
    for (int kk = std::max(0, j - 1); kk <= d; ++kk) s += A(j, kk) * P.coeffs[kk];
    out.coeffs[j] = s;
  }
  return out;
}

template <class R>
Poly<R> poly_axpy(R a, const Poly<R>& x, const Poly<R>& y) {
  Poly<R> out;
  out.coeffs.assign(std::max(x.coeffs.size(), y.coeffs.size()), R(0));
  for (size_t i = 0; i < x.coeffs.size(); ++i) out.coeffs[i] += a * x.coeffs[i];
  for (size_t i = 0; i < y.coeffs.size(); ++i) out.coeffs[i] += y.coeffs[i];
  return out;
}

}  // namespace wpa
