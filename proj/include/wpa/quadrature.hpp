#pragma once

// Gauss-Legendre rules, composite rules on cosine-graded meshes, and a
// golden-section optimizer. Everything is templated on the scalar type.

#include <utility>
#include <vector>

#include "wpa/errors.hpp"
#include "wpa/num.hpp"

namespace wpa {

template <class R>
struct GaussLegendre {
  std::vector<R> nodes;    // on (-1, 1)
  std::vector<R> weights;  // sum to 2
};

// Nodes as Legendre roots by Newton iteration on the three-term recurrence.
template <class R>
GaussLegendre<R> gauss_legendre(int n) {
  GaussLegendre<R> gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const R one = 1;
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess.
    R x = -num::cos(num::pi<R>() * (R(i) + R(0.75)) / (R(n) + R(0.5)));
    R dp = 0;
    for (int it = 0; it < 100; ++it) {
      R p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        R p2 = ((2 * R(k) - 1) * x * p1 - (R(k) - 1) * p0) / R(k);
        p0 = p1;
        p1 = p2;
      }
      dp = R(n) * (x * p1 - p0) / (x * x - one);
      R dx = p1 / dp;
      x -= dx;
      if (num::fabs(dx) <= 4 * num::eps<R>() * (num::fabs(x) + one)) {
        // one clean-up step
        p0 = 1;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          R p2 = ((2 * R(k) - 1) * x * p1 - (R(k) - 1) * p0) / R(k);
          p0 = p1;
          p1 = p2;
        }
        dp = R(n) * (x * p1 - p0) / (x * x - one);
        x -= p1 / dp;
        break;
      }
    }
    gl.nodes[i] = x;
    gl.weights[i] = 2 / ((one - x * x) * dp * dp);
  }
  return gl;
}

template <class R>
struct QuadRule {
  std::vector<R> nodes;
  std::vector<R> weights;
  R xmax = 0;  // domain is [-xmax, xmax] when built symmetric

  template <class F>
  R integrate(F&& f) const {
    R s = 0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
  size_t size() const { return nodes.size(); }
};

// Panel boundaries -X cos(j pi / panels): clustered toward both endpoints.
template <class R>
std::vector<R> cosine_breakpoints(R a, R b, int panels) {
  std::vector<R> bp(panels + 1);
  const R mid = (a + b) / 2, half = (b - a) / 2;
  for (int j = 0; j <= panels; ++j) bp[j] = mid - half * num::cos(R(j) * num::pi<R>() / R(panels));
  bp.front() = a;
  bp.back() = b;
  return bp;
}

template <class R>
QuadRule<R> composite_rule(const std::vector<R>& breakpoints, int nodes_per_panel) {
  const GaussLegendre<R> gl = gauss_legendre<R>(nodes_per_panel);
  QuadRule<R> q;
  const size_t panels = breakpoints.size() - 1;
  q.nodes.reserve(panels * nodes_per_panel);
  q.weights.reserve(panels * nodes_per_panel);
  for (size_t p = 0; p < panels; ++p) {
    const R a = breakpoints[p], b = breakpoints[p + 1];
    const R mid = (a + b) / 2, half = (b - a) / 2;
    for (int i = 0; i < nodes_per_panel; ++i) {
      q.nodes.push_back(mid + half * gl.nodes[i]);
      q.weights.push_back(half * gl.weights[i]);
    }
  }
  q.xmax = num::fabs(breakpoints.back());
  return q;
}

template <class R>
QuadRule<R> make_symmetric_rule(R xmax, int panels, int nodes_per_panel) {
  if (panels % 2) ++panels;  // keep a breakpoint at 0 and node symmetry
  return composite_rule(cosine_breakpoints(-xmax, xmax, panels), nodes_per_panel);
}

// Golden-section minimization of a unimodal function on [a, b].
template <class R, class F>
std::pair<R, R> golden_min(F&& f, R a, R b, int iters = 120) {
  const R inv_phi = (num::sqrt(R(5)) - 1) / 2;
  R c = b - inv_phi * (b - a);
  R d = a + inv_phi * (b - a);
  R fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > num::eps<R>() * (num::fabs(a) + num::fabs(b) + R(1)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

template <class R, class F>
std::pair<R, R> golden_max(F&& f, R a, R b, int iters = 120) {
  auto [x, v] = golden_min([&](R t) { return -f(t); }, a, b, iters);
  return {x, -v};
}

}  // namespace wpa
