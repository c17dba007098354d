#pragma once

// Grid-sup and composite-quadrature Lp norms over intervals and symmetric
// two-sided regions.

#include <functional>
#include <vector>

#include "wpa/quadrature.hpp"

namespace wpa {

template <class R>
std::vector<R> cosine_grid(R a, R b, int count) {
  std::vector<R> g(count);
  const R mid = (a + b) / 2, half = (b - a) / 2;
  for (int i = 0; i < count; ++i)
    g[i] = mid - half * num::cos(num::pi<R>() * R(i) / R(count - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

template <class R>
std::vector<R> uniform_grid(R a, R b, int count) {
  std::vector<R> g(count);
  for (int i = 0; i < count; ++i) g[i] = a + (b - a) * R(i) / R(count - 1);
  return g;
}

template <class R, class F>
R sup_on_grid(F&& g, const std::vector<R>& xs) {
  R s = 0;
  for (R x : xs) {
    R v = num::fabs(g(x));
    if (v > s) s = v;
  }
  return s;
}

// (Int_a^b |g|^p)^(1/p) on a cosine-graded composite rule.
template <class R, class F>
R lp_on_interval(F&& g, R a, R b, double p, int panels = 24, int npts = 16) {
  if (!(b > a)) return R(0);
  QuadRule<R> q = composite_rule(cosine_breakpoints(a, b, panels), npts);
  R s = 0;
  for (size_t i = 0; i < q.size(); ++i)
    s += q.weights[i] * num::pow(num::fabs(g(q.nodes[i])), R(p));
  return num::pow(s, R(1.0 / p));
}

// Norm over [a, b] union [-b, -a].
template <class R, class F>
R lp_two_sided(F&& g, R a, R b, double p, int panels = 24, int npts = 16) {
  if (!(b > a)) return R(0);
  QuadRule<R> q = composite_rule(cosine_breakpoints(a, b, panels), npts);
  R s = 0;
  for (size_t i = 0; i < q.size(); ++i) {
    R x = q.nodes[i];
    s += q.weights[i] * (num::pow(num::fabs(g(x)), R(p)) + num::pow(num::fabs(g(-x)), R(p)));
  }
  return num::pow(s, R(1.0 / p));
}

template <class R, class F>
R sup_two_sided(F&& g, R a, R b, int count = 1501) {
  if (!(b > a)) return R(0);
  R s = 0;
  for (R x : uniform_grid(a, b, count)) {
    R v = num::fabs(g(x));
    if (v > s) s = v;
    v = num::fabs(g(-x));
    if (v > s) s = v;
  }
  return s;
}

}  // namespace wpa
