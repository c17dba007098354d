#pragma once

// Truncated Taylor series ("jets") used to evaluate the weight exponents Q
// and their derivatives through chained elementary functions. Order 8 covers
// every derivative the library requests (class checks need Q^(r+2), r <= 3).

#include <array>
#include <cstdint>

#include "wpa/num.hpp"

namespace wpa {

inline constexpr int kJetOrder = 8;

template <class R>
struct Jet {
  std::array<R, kJetOrder + 1> c{};

  static Jet variable(R x0) {
    Jet j;
    j.c[0] = x0;
    j.c[1] = R(1);
    return j;
  }
  static Jet constant(R v) {
    Jet j;
    j.c[0] = v;
    return j;
  }

  R value() const { return c[0]; }

  // k-th derivative of the represented function at the expansion point.
  R deriv(int k) const {
    R f = 1;
    for (int i = 2; i <= k; ++i) f *= R(i);
    return c[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i <= kJetOrder; ++i) c[i] += o.c[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i <= kJetOrder; ++i) c[i] -= o.c[i];
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= kJetOrder; ++i)
      for (int j = 0; i + j <= kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator*(R s, Jet a) {
    for (auto& v : a.c) v *= s;
    return a;
  }
};

template <class R>
Jet<R> jet_exp(const Jet<R>& a) {
  Jet<R> b;
  b.c[0] = num::exp(a.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    R s = 0;
    for (int j = 1; j <= k; ++j) s += R(j) * a.c[j] * b.c[k - j];
    b.c[k] = s / R(k);
  }
  return b;
}

// exp(a) - 1 with a cancellation-free constant term.
template <class R>
Jet<R> jet_expm1(const Jet<R>& a) {
  Jet<R> b = jet_exp(a);
  b.c[0] = num::expm1(a.c[0]);
  return b;
}

template <class R>
Jet<R> jet_log(const Jet<R>& a) {
  Jet<R> b;
  b.c[0] = num::log(a.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    R s = a.c[k];
    for (int j = 1; j < k; ++j) s -= (R(j) / R(k)) * b.c[j] * a.c[k - j];
    b.c[k] = s / a.c[0];
  }
  return b;
}

// log(1 + a); constant term via log1p for small arguments.
template <class R>
Jet<R> jet_log1p(const Jet<R>& a) {
  Jet<R> shifted = a;
  shifted.c[0] += R(1);
  Jet<R> b = jet_log(shifted);
  b.c[0] = num::log1p(a.c[0]);
  return b;
}

template <class R>
Jet<R> jet_pow_int(const Jet<R>& a, int n) {
  Jet<R> r = Jet<R>::constant(R(1));
  Jet<R> base = a;
  int e = n;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// a^mu for real mu; requires a.value() > 0. Integer exponents take the exact
// multiplicative route so x = 0 and negative bases stay valid.
template <class R>
Jet<R> jet_pow(const Jet<R>& a, double mu) {
  double r = std::nearbyint(mu);
  if (std::fabs(mu - r) < 1e-12 && r >= 0 && r <= 64) return jet_pow_int(a, static_cast<int>(r));
  Jet<R> la = jet_log(a);
  return jet_exp(R(mu) * la);
}

}  // namespace wpa
