#pragma once

// Weighted best approximation: Remez exchange for the sup norm, Fourier
// truncation for L2, and IRLS on the quadrature grid for the other Lp.
// E_{p,n}(w, f) is the achieved error of the dispatched routine.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wpa/linalg.hpp"
#include "wpa/poly.hpp"

namespace wpa {

template <class R>
struct ApproxResult {
  Poly<R> poly;
  R error = 0;
  double p = std::numeric_limits<double>::infinity();
  std::vector<std::pair<R, R>> alternation;  // (x, weighted residual) at the final reference
  std::vector<R> irls_history;               // per-iteration error estimates
  std::vector<std::string> flags;            // remez_stall, precondition_fail, ...
  R xmax = 0;

  bool has_flag(const char* f) const {
    for (const auto& s : flags)
      if (s == f) return true;
    return false;
  }
};

namespace detail {

// Fine evaluation grid for sup norms: cosine-graded over the whole truncated
// interval; weighted extrema live well inside, the golden polish sharpens
// them afterwards.
template <class R>
std::vector<R> remez_grid(R xmax, int count = 2001) {
  std::vector<R> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = -xmax * num::cos(num::pi<R>() * R(i) / R(count - 1));
  g.front() = -xmax;
  g.back() = xmax;
  return g;
}

template <class R>
struct Extremum {
  R x;
  R r;  // weighted residual there
};

// Local extrema of the weighted residual, golden-polished, then reduced to
// an alternating sequence (same-sign neighbors keep the larger magnitude).
template <class R, class Residual>
std::vector<Extremum<R>> alternating_extrema(const std::vector<R>& grid,
                                             const std::vector<R>& rvals, Residual&& res) {
  const int M = int(grid.size());
  std::vector<Extremum<R>> ext;
  auto push = [&](R x, R r) {
    if (!ext.empty() && ((ext.back().r >= 0) == (r >= 0))) {
      if (num::fabs(r) > num::fabs(ext.back().r)) ext.back() = {x, r};
      return;
    }
    ext.push_back({x, r});
  };
  // endpoints participate as candidates
  push(grid[0], rvals[0]);
  for (int i = 1; i + 1 < M; ++i) {
    const R a = num::fabs(rvals[i - 1]), b = num::fabs(rvals[i]), c = num::fabs(rvals[i + 1]);
    const bool same_sign = ((rvals[i - 1] >= 0) == (rvals[i] >= 0)) &&
                           ((rvals[i] >= 0) == (rvals[i + 1] >= 0));
    if (b >= a && b >= c && (b > a || b > c)) {
      R sign = rvals[i] >= 0 ? R(1) : R(-1);
      auto [x, v] = golden_max([&](R t) { return sign * res(t); }, grid[i - 1], grid[i + 1], 60);
      if (same_sign || v >= b) push(x, sign * v);
      else push(grid[i], rvals[i]);
    }
  }
  push(grid[M - 1], rvals[M - 1]);
  return ext;
}

// Trim an alternating sequence to exactly want points, preserving
// alternation and keeping the largest magnitudes.
template <class R>
void trim_alternating(std::vector<Extremum<R>>& ext, int want) {
  while (int(ext.size()) > want) {
    int excess = int(ext.size()) - want;
    // smallest magnitude
    int imin = 0;
    for (int i = 1; i < int(ext.size()); ++i)
      if (num::fabs(ext[i].r) < num::fabs(ext[imin].r)) imin = i;
    if (imin == 0) {
      ext.erase(ext.begin());
    } else if (imin == int(ext.size()) - 1) {
      ext.pop_back();
    } else if (excess >= 2) {
      // drop the weak interior point and its weaker neighbor
      int nb = num::fabs(ext[imin - 1].r) < num::fabs(ext[imin + 1].r) ? imin - 1 : imin + 1;
      int lo = std::min(imin, nb);
      ext.erase(ext.begin() + lo, ext.begin() + lo + 2);
    } else {
      // single excess point: drop the weaker endpoint
      if (num::fabs(ext.front().r) <= num::fabs(ext.back().r)) ext.erase(ext.begin());
      else ext.pop_back();
    }
  }
}

}  // namespace detail

// Weighted Remez exchange (second algorithm, multi-point) on [-X, X].
// Seeded with the discrete L2 projection; the exchange then drives the
// reference to equioscillation of (f - P) w.
template <class R>
ApproxResult<R> best_linf(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n) {
  if (n < 0 || n > basis.nmax())
    throw Error("bestapprox", errc::degree_out_of_range,
                "degree " + std::to_string(n) + " outside basis range");
  const R X = basis.xmax();
  ApproxResult<R> out;
  out.p = std::numeric_limits<double>::infinity();
  out.xmax = X;

  const std::vector<R> grid = detail::remez_grid(X);
  const int M = int(grid.size());
  std::vector<R> fv(M), wv(M);
  R scale = 0;
  for (int i = 0; i < M; ++i) {
    fv[i] = f(grid[i]);
    wv[i] = basis.weight(grid[i]);
    scale = std::max<R>(scale, num::fabs(fv[i] * wv[i]));
  }
  const R degenerate_floor = std::max<R>(scale, R(1)) * 50 * num::eps<R>();

  Poly<R> P(expansion_coeffs(basis, f, n));
  auto res_at = [&](R x) { return (f(x) - eval_poly(basis, P, x)) * basis.weight(x); };

  std::vector<R> rv(M);
  auto refresh = [&]() {
    R mx = 0;
    for (int i = 0; i < M; ++i) {
      rv[i] = fv[i] - eval_poly(basis, P, grid[i]);
      rv[i] *= wv[i];
      mx = std::max<R>(mx, num::fabs(rv[i]));
    }
    return mx;
  };

  R maxr = refresh();
  Poly<R> best_poly = P;
  R best_err = maxr;
  std::vector<detail::Extremum<R>> best_alt;
  int stall = 0;
  bool converged = false;

  for (int iter = 0; iter < 80; ++iter) {
    if (maxr <= degenerate_floor) {
      best_poly = P;
      best_err = maxr;
      best_alt.clear();
      out.flags.push_back("degenerate");
      converged = true;
      break;
    }
    auto ext = detail::alternating_extrema(grid, rv, res_at);
    if (int(ext.size()) < n + 2) {
      out.flags.push_back("remez_stall");
      break;
    }
    detail::trim_alternating(ext, n + 2);
    // equioscillation test on the current reference
    R ref_min = num::fabs(ext[0].r), ref_max = ref_min;
    for (auto& e : ext) {
      ref_min = std::min<R>(ref_min, num::fabs(e.r));
      ref_max = std::max<R>(ref_max, num::fabs(e.r));
    }
    if (maxr < best_err) {
      best_err = maxr;
      best_poly = P;
      best_alt = ext;
      stall = 0;
    } else if (++stall > 10) {
      out.flags.push_back("remez_stall");
      break;
    }
    if ((maxr - ref_min) <= R(1e-9) * maxr) {
      best_err = maxr;
      best_poly = P;
      best_alt = ext;
      converged = true;
      break;
    }
    // solve on the new reference: rows scaled by w to stay conditioned
    Matrix<R> A(n + 2, n + 2);
    std::vector<R> b(n + 2), pk(n + 1);
    for (int i = 0; i < n + 2; ++i) {
      const R w = basis.weight(ext[i].x);
      basis.eval_all(ext[i].x, pk);
      for (int k = 0; k <= n; ++k) A(i, k) = w * pk[k];
      A(i, n + 1) = (i % 2 == 0) ? R(1) : R(-1);
      b[i] = w * f(ext[i].x);
    }
    std::vector<R> sol = lu_solve_refined(A, b);
    P.coeffs.assign(sol.begin(), sol.begin() + n + 1);
    maxr = refresh();
  }
  if (!converged && out.flags.empty()) out.flags.push_back("remez_stall");

  out.poly = best_poly;
  out.error = best_err;
  // the polished reference carries the sharpest extremum values
  for (auto& e : best_alt) {
    out.alternation.emplace_back(e.x, e.r);
    out.error = std::max<R>(out.error, num::fabs(e.r));
  }
  // computable surrogate for "w f vanishes at infinity"
  const R boundary = std::max<R>(num::fabs(fv[0] * wv[0]), num::fabs(fv[M - 1] * wv[M - 1]));
  if (boundary > R(1e-3) * std::max<R>(out.error, degenerate_floor))
    out.flags.push_back("precondition_fail");
  return out;
}

// Best L2(w^2) approximation: the Fourier partial sum s_{n+1}. The error is
// the Parseval tail truncated at the basis degree.
template <class R>
ApproxResult<R> best_l2(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n) {
  if (n < 0 || n > basis.nmax())
    throw Error("bestapprox", errc::degree_out_of_range, "degree outside basis range");
  std::vector<R> a = expansion_coeffs(basis, f, basis.nmax());
  ApproxResult<R> out;
  out.p = 2.0;
  out.xmax = basis.xmax();
  out.poly.coeffs.assign(a.begin(), a.begin() + n + 1);
  R tail = 0;
  for (int k = n + 1; k <= basis.nmax(); ++k) tail += a[k] * a[k];
  out.error = num::sqrt(tail);
  out.flags.push_back("l2_tail_truncated");
  return out;
}

// IRLS for finite p. Minimizes sum_i omega_i |f - P|^p w^p on the quadrature
// grid; epsilon-regularized for p < 2, damped for p > 2.
template <class R>
ApproxResult<R> best_lp_irls(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n,
                             double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error("bestapprox", errc::bad_config, "IRLS needs finite p >= 1");
  if (n < 0 || n > basis.nmax())
    throw Error("bestapprox", errc::degree_out_of_range, "degree outside basis range");
  const auto& q = basis.quad();
  const size_t M = q.size();
  std::vector<R> fv(M), wpw(M);  // omega_i * w(x_i)^p
  R scale = 0;
  for (size_t i = 0; i < M; ++i) {
    fv[i] = f(q.nodes[i]);
    R w = basis.weight(q.nodes[i]);
    wpw[i] = q.weights[i] * num::pow(w, R(p));
    scale = std::max<R>(scale, num::fabs(fv[i] * w));
  }
  const R eps_r = R(1e-10) * std::max<R>(scale, R(1));

  ApproxResult<R> out;
  out.p = p;
  out.xmax = basis.xmax();

  std::vector<R> c(n + 1, R(0));
  std::vector<std::vector<R>> pk(M, std::vector<R>(n + 1));
  for (size_t i = 0; i < M; ++i) basis.eval_all(q.nodes[i], pk[i]);

  const double damp = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
  bool converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    // weights u_i = |r_i|^{p-2}
    Matrix<R> N(n + 1, n + 1);
    std::vector<R> rhs(n + 1, R(0));
    for (size_t i = 0; i < M; ++i) {
      R Pi = 0;
      for (int k = 0; k <= n; ++k) Pi += c[k] * pk[i][k];
      R r = num::fabs(fv[i] - Pi);
      R u = iter == 0 ? R(1) : num::pow(std::max<R>(r, eps_r), R(p - 2.0));
      R wu = wpw[i] * u;
      for (int k = 0; k <= n; ++k) {
        rhs[k] += wu * fv[i] * pk[i][k];
        for (int j = k; j <= n; ++j) N(k, j) += wu * pk[i][k] * pk[i][j];
      }
    }
    for (int k = 0; k <= n; ++k)
      for (int j = 0; j < k; ++j) N(k, j) = N(j, k);
    std::vector<R> c_ls = cholesky_solve(N, rhs);
    R dc = 0, cn = 0;
    for (int k = 0; k <= n; ++k) {
      R next = c[k] + R(damp) * (c_ls[k] - c[k]);
      dc = std::max<R>(dc, num::fabs(next - c[k]));
      c[k] = next;
      cn = std::max<R>(cn, num::fabs(c[k]));
    }
    // error estimate for the history
    R err_p = 0;
    for (size_t i = 0; i < M; ++i) {
      R Pi = 0;
      for (int k = 0; k <= n; ++k) Pi += c[k] * pk[i][k];
      err_p += wpw[i] * num::pow(num::fabs(fv[i] - Pi), R(p));
    }
    out.irls_history.push_back(num::pow(err_p, R(1.0 / p)));
    if (dc <= R(1e-9) * std::max<R>(R(1), cn)) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error("bestapprox", errc::irls_non_convergence, "IRLS did not converge in 200 iterations");

  out.poly.coeffs = c;
  // report the norm from a refined rule
  QuadRule<R> fine = make_symmetric_rule(basis.xmax(), 120, 32);
  R err_p = 0;
  for (size_t i = 0; i < fine.size(); ++i) {
    R x = fine.nodes[i];
    R w = basis.weight(x);
    R r = num::fabs(f(x) - eval_poly(basis, out.poly, x));
    err_p += fine.weights[i] * num::pow(r * w, R(p));
  }
  out.error = num::pow(err_p, R(1.0 / p));
  return out;
}

template <class R>
ApproxResult<R> best_lp(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw Error("bestapprox", errc::bad_config, "best_lp expects p in (1, inf)");
  return best_lp_irls(f, basis, n, p);
}

template <class R>
ApproxResult<R> best_l1(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n) {
  return best_lp_irls(f, basis, n, 1.0);
}

// E_{p,n}(w; f): dispatch on p and return the achieved error.
template <class R>
ApproxResult<R> best_approx(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n,
                            double p) {
  if (std::isinf(p)) return best_linf(f, basis, n);
  if (p == 2.0) return best_l2(f, basis, n);
  if (p == 1.0) return best_l1(f, basis, n);
  return best_lp(f, basis, n, p);
}

template <class R>
R E_value(const std::function<R(R)>& f, const OrthoBasis<R>& basis, int n, double p) {
  return best_approx(f, basis, n, p).error;
}

}  // namespace wpa
