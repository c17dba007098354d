#pragma once

// Exponential weight families w = exp(-Q) on the real line, the regularity
// function T(x) = x Q'(x)/Q(x), the transformed weights T^mu * w, and the
// Lp-flavored variants w-sharp / w-flat.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpa/errors.hpp"
#include "wpa/jet.hpp"

namespace wpa {

enum class WeightFamily { freud_power, iter_exp, power_tower };

struct LpFlavor {
  enum class Sign { sharp, flat };
  double p = 2.0;  // infinity allowed; the 1/p exponent then vanishes
  double beta = 1.5;
  Sign sign = Sign::sharp;
};

struct WeightSpec {
  WeightFamily family = WeightFamily::freud_power;
  double alpha = 2.0;  // exponent (FreudPower, PowerTower, IterExp inner)
  double c = 1.0;      // FreudPower scale
  int l = 1;           // IterExp iteration depth, 1..3
  double m = 0.0;      // IterExp outer power |x|^m
  double t_exponent = 0.0;
  std::optional<LpFlavor> lp_flavor;

  static WeightSpec freud(double alpha, double c = 1.0) {
    WeightSpec s;
    s.family = WeightFamily::freud_power;
    s.alpha = alpha;
    s.c = c;
    s.validate();
    return s;
  }
  static WeightSpec iter_exp(int l, double alpha, double m) {
    WeightSpec s;
    s.family = WeightFamily::iter_exp;
    s.l = l;
    s.alpha = alpha;
    s.m = m;
    s.validate();
    return s;
  }
  static WeightSpec power_tower(double alpha) {
    WeightSpec s;
    s.family = WeightFamily::power_tower;
    s.alpha = alpha;
    s.validate();
    return s;
  }

  WeightSpec with_t_exponent(double mu) const {
    WeightSpec s = *this;
    s.t_exponent = mu;
    return s;
  }
  WeightSpec shift_t_exponent(double dmu) const {
    WeightSpec s = *this;
    s.t_exponent += dmu;
    return s;
  }
  WeightSpec with_flavor(std::optional<LpFlavor> f) const {
    WeightSpec s = *this;
    s.lp_flavor = std::move(f);
    return s;
  }
  // Base weight: mu = 0, no Lp flavor. MRS numbers and T always refer to it.
  WeightSpec base() const {
    WeightSpec s = *this;
    s.t_exponent = 0.0;
    s.lp_flavor.reset();
    return s;
  }

  void validate() const;
  bool is_freud_type() const { return family == WeightFamily::freud_power; }
  std::string family_name() const;
  std::string cache_key() const;
};

// Limit of T(x) as x -> 0, per family.
double t_zero_limit(const WeightSpec& spec);

// Whether Q is analytic at x = 0 (kink-free), deciding derivative validity
// there.
bool analytic_at_zero(const WeightSpec& spec);

// l-fold iterated exponential with early overflow saturation; l <= 3.
template <class R>
R exp_iter(int l, R x) {
  R v = x;
  for (int i = 0; i < l; ++i) {
    if (!(v <= num::exp_arg_max<R>())) return num::infinity<R>();
    v = num::exp(v);
  }
  return v;
}

namespace detail {

// Jet of the base exponent Q at ax > 0 (analytic families also accept
// ax == 0). The iterated exponential uses the chain
//   D_l(t) = exp_l(t) - exp_l(0) = exp_l(0) * expm1(D_{l-1}(t)),
// which keeps small arguments cancellation-free.
template <class R>
Jet<R> q_jet(const WeightSpec& spec, R ax) {
  const Jet<R> x = Jet<R>::variable(ax);
  switch (spec.family) {
    case WeightFamily::freud_power:
      return R(spec.c) * jet_pow(x, spec.alpha);
    case WeightFamily::iter_exp: {
      if (spec.alpha == 0.0) {
        R el1 = exp_iter(spec.l, R(1));
        return el1 * jet_pow(x, spec.m);
      }
      Jet<R> d = jet_pow(x, spec.alpha);
      R el0 = 1;  // exp_0(0)
      for (int j = 1; j <= spec.l; ++j) {
        el0 = (j == 1) ? R(1) : num::exp(el0);  // exp_{j-1}(0) -> exp_j(0) below
        d = jet_expm1(d);
        for (auto& v : d.c) v *= el0;
      }
      if (spec.m != 0.0) d = d * jet_pow(x, spec.m);
      return d;
    }
    case WeightFamily::power_tower: {
      Jet<R> u = jet_pow(x, spec.alpha);
      Jet<R> v = jet_log1p(x);
      return jet_expm1(u * v);
    }
  }
  throw Error("weights", errc::bad_config, "unknown family");
}

}  // namespace detail

// Q^(order)(x) of the base exponent. Even/odd symmetry is exact: the value is
// computed at |x| and reflected.
template <class R>
R eval_Q(const WeightSpec& spec, R x, int order = 0) {
  if (order < 0 || order > kJetOrder)
    throw Error("weights", errc::unsupported_order,
                "derivative order " + std::to_string(order) + " not implemented");
  const bool neg = x < R(0);
  const R ax = neg ? -x : x;
  if (ax == R(0)) {
    if (order <= 1) return R(0);  // Q(0) = 0, Q' continuous and odd
    if (!analytic_at_zero(spec))
      throw Error("weights", errc::domain_error,
                  "Q^(" + std::to_string(order) + ") undefined at the kink x = 0");
  }
  R v = detail::q_jet(spec, ax).deriv(order);
  if (neg && (order & 1)) v = -v;
  return v;
}

// T(x) = x Q'(x) / Q(x), extended continuously through 0.
template <class R>
R eval_T(const WeightSpec& spec, R x) {
  if (spec.family == WeightFamily::freud_power) return R(spec.alpha);
  R ax = x < R(0) ? -x : x;
  if (ax < R(1e-7)) return R(t_zero_limit(spec));
  Jet<R> q = detail::q_jet(spec, ax);
  if (!num::isfinite(q.c[0]) || !num::isfinite(q.c[1])) return num::infinity<R>();
  return ax * q.c[1] / q.c[0];
}

// w(x) = T^mu(x) * exp(-Q(x)) * (Lp flavor factor). Assembled in log space;
// underflow clamps to exact zero, never Inf/NaN.
template <class R>
R eval_w(const WeightSpec& spec, R x) {
  const R ax = x < R(0) ? -x : x;
  R q0 = 0, q1 = 0;
  if (ax > R(0)) {
    Jet<R> q = detail::q_jet(spec, ax);
    q0 = q.c[0];
    q1 = q.c[1];
    if (!num::isfinite(q0) || q0 > R(800)) return R(0);
  }
  R logw = -q0;
  if (spec.t_exponent != 0.0) logw += R(spec.t_exponent) * num::log(eval_T(spec, ax));
  if (spec.lp_flavor && std::isfinite(spec.lp_flavor->p)) {
    const auto& fl = *spec.lp_flavor;
    R t = num::log1p(num::fabs(q1)) + R(fl.beta) * num::log1p(ax);
    logw += (fl.sign == LpFlavor::Sign::sharp ? -t : t) / R(fl.p);
  }
  if (logw < R(-745)) return R(0);
  return num::exp(logw);
}

// ---- class membership report (double precision) ----

struct WeightClassReport {
  std::map<std::string, bool> condition_flags;
  double lambda_hat = 0;        // sup of |Q'|/Q^lambda over |x| >= K
  double T_min = 0;             // empirical inf of T (estimate of Lambda)
  double quasi_increase_C = 0;  // smallest C with T(x) <= C T(y), x < y
  double K = 1.0;
  double lambda = 0;
  int r = 0;
  std::vector<double> grid;

  bool pass() const {
    for (const auto& [k, v] : condition_flags)
      if (!v) return false;
    return true;
  }
};

// Numeric verification of the weight-class conditions on a grid. The grid
// must be sorted, symmetric about 0, exclude 0, and hold >= 16 points.
WeightClassReport check_class(const WeightSpec& spec, const std::vector<double>& grid, int r,
                              double lambda);

// Symmetric geometric grid adapted to the family (capped where Q <= 1e10).
std::vector<double> standard_grid(const WeightSpec& spec, int points_per_side = 96);

}  // namespace wpa
