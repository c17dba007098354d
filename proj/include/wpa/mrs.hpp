#pragma once

// Mhaskar-Rakhmanov-Saff numbers a_x for an exponential weight, the inverse
// scale map sigma(t), and the band function Phi_t. a_x solves
//   x = (2/pi) * Int_0^1 a u Q'(a u) / sqrt(1 - u^2) du,
// evaluated with u = sin(theta) so the endpoint singularity disappears.

#include <map>
#include <mutex>
#include <vector>

#include "wpa/errors.hpp"
#include "wpa/quadrature.hpp"
#include "wpa/weights.hpp"

namespace wpa {

template <class R>
class MrsSolver {
 public:
  explicit MrsSolver(WeightSpec spec, int quad_nodes = 64, double tol = 1e-10)
      : spec_(spec.base()), tol_(tol), gl_(gauss_legendre<R>(quad_nodes)) {
    // theta-grid on [0, pi/2]
    theta_nodes_.resize(gl_.nodes.size());
    theta_weights_.resize(gl_.nodes.size());
    const R quarter_pi = num::pi<R>() / 4;
    for (size_t i = 0; i < gl_.nodes.size(); ++i) {
      theta_nodes_[i] = quarter_pi * (gl_.nodes[i] + 1);
      theta_weights_[i] = quarter_pi * gl_.weights[i];
    }
  }

  const WeightSpec& spec() const { return spec_; }
  double tol() const { return tol_; }

  // G(a) = (2/pi) Int_0^{pi/2} a sin(theta) Q'(a sin theta) dtheta; strictly
  // increasing in a, so the defining equation has a unique root.
  R defining_integral(R a) const {
    R s = 0;
    for (size_t i = 0; i < theta_nodes_.size(); ++i) {
      R u = num::sin(theta_nodes_[i]);
      s += theta_weights_[i] * a * u * eval_Q(spec_, a * u, 1);
    }
    return s * 2 / num::pi<R>();
  }

  R mrs_number(R x) const {
    if (!(x > R(0))) throw Error("mrs", errc::domain_error, "a_x requires x > 0");
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return it->second;
    }
    R a = solve(x);
    {
      std::lock_guard<std::mutex> lk(mu_);
      cache_[x] = a;
    }
    return a;
  }

  // sigma(t) = a_u at the u solving a_u / u = t. The map u -> a_u/u is
  // strictly decreasing for the supported families, so bisection applies.
  R sigma(R t) const {
    if (!(t > R(0))) throw Error("mrs", errc::domain_error, "sigma requires t > 0");
    const R u_lo = R(1e-3), u_hi = R(1e12);
    R h_lo = ratio(u_lo) - t;
    if (h_lo < 0)
      throw Error("mrs", errc::out_of_range, "t above the attainable range of a_u/u");
    R h_hi = ratio(u_hi) - t;
    if (h_hi > 0) throw Error("mrs", errc::out_of_range, "t below the attainable range of a_u/u");
    R lo = num::log(u_lo), hi = num::log(u_hi);
    for (int it = 0; it < 200 && (hi - lo) > R(1e-15) * (num::fabs(lo) + num::fabs(hi) + 1); ++it) {
      R mid = (lo + hi) / 2;
      (ratio(num::exp(mid)) - t > 0 ? lo : hi) = mid;
    }
    R u = num::exp((lo + hi) / 2);
    R a = mrs_number(u);
    if (num::fabs(a / u - t) > R(100) * R(tol_) * t)
      throw Error("mrs", errc::non_convergence, "sigma(t) bisection did not converge");
    return a;
  }

  // Phi_t(x) = sqrt(|1 - |x|/sigma(t)|) + T(sigma(t))^{-1/2}.
  R phi(R t, R x) const {
    R s = sigma(t);
    R ax = x < R(0) ? -x : x;
    return num::sqrt(num::fabs(1 - ax / s)) + 1 / num::sqrt(eval_T(spec_, s));
  }

  struct SanityRatio {
    std::string name;
    double min = 0, max = 0;
    bool pass = false;
  };
  struct SanityReport {
    std::vector<SanityRatio> ratios;
    bool pass = true;
  };

  // Empirical spread of the asymptotic equivalences: a_{2x} ~ a_x,
  // |Q'(a_x)| ~ x sqrt(T(a_x))/a_x, Q(a_x) ~ x/sqrt(T(a_x)), and for
  // unbounded T the bound a_x <= C x^eta.
  SanityReport sanity(const std::vector<R>& xs) const {
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      if (!(xs[i] < xs[i + 1]) || !(xs[i] > R(1)))
        throw Error("mrs", errc::domain_error, "sanity abscissae must be increasing and > 1");
    SanityReport rep;
    auto add = [&rep](const std::string& name, const std::vector<R>& vals) {
      SanityRatio r;
      r.name = name;
      R lo = vals[0], hi = vals[0];
      for (R v : vals) {
        lo = lo < v ? lo : v;
        hi = hi > v ? hi : v;
      }
      r.min = num::to_double(lo);
      r.max = num::to_double(hi);
      r.pass = r.min > 0 && std::isfinite(r.max) && r.max / r.min < 100.0;
      rep.ratios.push_back(r);
      rep.pass = rep.pass && r.pass;
    };
    std::vector<R> doubling, qprime, qval, eta;
    for (R x : xs) {
      R a = mrs_number(x);
      R t = eval_T(spec_, a);
      doubling.push_back(mrs_number(2 * x) / a);
      qprime.push_back(num::fabs(eval_Q(spec_, a, 1)) * a / (x * num::sqrt(t)));
      qval.push_back(eval_Q(spec_, a) * num::sqrt(t) / x);
      eta.push_back(a / num::sqrt(x));
    }
    add("a_2x_over_a_x", doubling);
    add("qprime_equiv", qprime);
    add("q_equiv", qval);
    const bool unbounded_T = spec_.family != WeightFamily::freud_power && spec_.alpha > 0;
    if (unbounded_T) add("a_x_over_x_eta", eta);
    return rep;
  }

 private:
  R ratio(R u) const { return mrs_number(u) / u; }

  R solve(R x) const {
    // bracket
    R lo = 1, hi = 1;
    R g = defining_integral(R(1));
    if (g < x) {
      while (defining_integral(hi) < x) {
        hi *= 2;
        if (hi > R(1e300)) throw Error("mrs", errc::bracket_failure, "no bracket below 1e300");
      }
      lo = hi / 2;
    } else {
      while (defining_integral(lo) > x) {
        lo /= 2;
        if (lo < R(1e-300)) throw Error("mrs", errc::bracket_failure, "no bracket above 1e-300");
      }
      hi = lo * 2;
    }
    // bisection to ~1e-3 relative
    while ((hi - lo) > R(1e-3) * lo) {
      R mid = (lo + hi) / 2;
      (defining_integral(mid) < x ? lo : hi) = mid;
    }
    // secant polish inside the bracket, bisection fallback
    R a0 = lo, a1 = hi;
    R f0 = defining_integral(a0) - x, f1 = defining_integral(a1) - x;
    for (int it = 0; it < 200; ++it) {
      if (num::fabs(f1) <= R(tol_) * x) return a1;
      R step = f1 * (a1 - a0) / (f1 - f0);
      R next = a1 - step;
      if (!(next > lo && next < hi)) next = (lo + hi) / 2;
      R fn = defining_integral(next) - x;
      (fn < 0 ? lo : hi) = next;
      a0 = a1;
      f0 = f1;
      a1 = next;
      f1 = fn;
      if (hi - lo <= 8 * num::eps<R>() * hi) return a1;
    }
    throw Error("mrs", errc::non_convergence, "a_x root refinement exceeded max iterations");
  }

  WeightSpec spec_;
  double tol_;
  GaussLegendre<R> gl_;
  std::vector<R> theta_nodes_, theta_weights_;
  mutable std::map<R, R> cache_;
  mutable std::mutex mu_;
};

}  // namespace wpa
