#include "wpa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wpa {

void WeightSpec::validate() const {
  switch (family) {
    case WeightFamily::freud_power:
      if (!(alpha > 1.0)) throw Error("weights", errc::bad_config, "FreudPower needs alpha > 1");
      if (!(c > 0.0)) throw Error("weights", errc::bad_config, "FreudPower needs c > 0");
      break;
    case WeightFamily::iter_exp:
      if (l < 1 || l > 3) throw Error("weights", errc::bad_config, "IterExp supports 1 <= l <= 3");
      if (!(alpha >= 0.0) || !(m >= 0.0) || !(alpha + m > 1.0))
        throw Error("weights", errc::bad_config, "IterExp needs alpha >= 0, m >= 0, alpha + m > 1");
      break;
    case WeightFamily::power_tower:
      if (!(alpha > 1.0)) throw Error("weights", errc::bad_config, "PowerTower needs alpha > 1");
      break;
  }
  if (lp_flavor) {
    if (!(lp_flavor->p >= 1.0)) throw Error("weights", errc::bad_config, "lp_flavor needs p >= 1");
    if (!(lp_flavor->beta > 0.0)) throw Error("weights", errc::bad_config, "lp_flavor needs beta > 0");
  }
}

std::string WeightSpec::family_name() const {
  switch (family) {
    case WeightFamily::freud_power: return "FreudPower";
    case WeightFamily::iter_exp: return "IterExp";
    case WeightFamily::power_tower: return "PowerTower";
  }
  return "?";
}

std::string WeightSpec::cache_key() const {
  std::ostringstream os;
  os.precision(17);
  os << family_name() << '|' << alpha << '|' << c << '|' << l << '|' << m << '|' << t_exponent;
  if (lp_flavor)
    os << "|lp:" << lp_flavor->p << ':' << lp_flavor->beta << ':'
       << (lp_flavor->sign == LpFlavor::Sign::sharp ? 's' : 'f');
  return os.str();
}

double t_zero_limit(const WeightSpec& spec) {
  switch (spec.family) {
    case WeightFamily::freud_power: return spec.alpha;
    case WeightFamily::iter_exp: return spec.alpha + spec.m;
    case WeightFamily::power_tower: return spec.alpha + 1.0;
  }
  return 0;
}

static bool even_nonneg_integer(double v) {
  double r = std::nearbyint(v);
  if (std::fabs(v - r) > 1e-12 || r < 0) return false;
  return std::fmod(r, 2.0) == 0.0;
}

bool analytic_at_zero(const WeightSpec& spec) {
  switch (spec.family) {
    case WeightFamily::freud_power: return even_nonneg_integer(spec.alpha);
    case WeightFamily::iter_exp:
      return (spec.alpha == 0.0 || even_nonneg_integer(spec.alpha)) &&
             (spec.m == 0.0 || even_nonneg_integer(spec.m));
    case WeightFamily::power_tower: return false;
  }
  return false;
}

namespace {

double q_deriv(const WeightSpec& spec, double x, int k) { return eval_Q(spec, x, k); }

// sup |Q^(k)| over the positive half-grid, used to detect derivative chains
// that vanish identically (polynomial Q), where ratio conditions are vacuous.
double sup_abs_deriv(const WeightSpec& spec, const std::vector<double>& xs, int k) {
  double s = 0;
  for (double x : xs) s = std::max(s, std::fabs(q_deriv(spec, x, k)));
  return s;
}

}  // namespace

WeightClassReport check_class(const WeightSpec& spec, const std::vector<double>& grid, int r,
                              double lambda) {
  if (grid.size() < 16)
    throw Error("weights", errc::grid_too_small,
                "class-check grid needs >= 16 points, got " + std::to_string(grid.size()));
  const size_t n = grid.size();
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(grid[i] < grid[i + 1]))
      throw Error("weights", errc::domain_error, "class-check grid must be strictly sorted");
  for (size_t i = 0; i < n; ++i) {
    if (grid[i] == 0.0)
      throw Error("weights", errc::domain_error, "class-check grid must exclude 0");
    if (grid[i] != -grid[n - 1 - i])
      throw Error("weights", errc::domain_error, "class-check grid must be symmetric about 0");
  }

  WeightClassReport rep;
  rep.K = 1.0;
  rep.lambda = lambda;
  rep.r = r;
  rep.grid = grid;

  std::vector<double> pos;
  for (double x : grid)
    if (x > 0) pos.push_back(x);
  std::vector<double> tail;  // |x| >= K region for Definition-2.1 style ratios
  for (double x : pos)
    if (x >= rep.K) tail.push_back(x);
  if (tail.size() < 4) tail.assign(pos.end() - std::min<size_t>(4, pos.size()), pos.end());

  // (a) Q(0) = 0 and Q' finite on the grid.
  bool a_ok = eval_Q(spec, 0.0, 0) == 0.0;
  for (double x : pos) a_ok = a_ok && std::isfinite(q_deriv(spec, x, 1));
  rep.condition_flags["a"] = a_ok;

  // (b) Q'' > 0 away from 0.
  bool b_ok = true;
  for (double x : pos) b_ok = b_ok && q_deriv(spec, x, 2) > 0.0;
  rep.condition_flags["b"] = b_ok;

  // (c) Q -> infinity: increasing along the grid and large at its end.
  bool c_ok = true;
  for (size_t i = 0; i + 1 < pos.size(); ++i)
    c_ok = c_ok && eval_Q(spec, pos[i + 1]) > eval_Q(spec, pos[i]);
  c_ok = c_ok && eval_Q(spec, pos.back()) > 1e3 * std::max(1e-300, eval_Q(spec, pos.front()));
  rep.condition_flags["c"] = c_ok;

  // (d) T quasi-increasing with T >= Lambda > 1.
  std::vector<double> tvals(pos.size());
  for (size_t i = 0; i < pos.size(); ++i) tvals[i] = eval_T(spec, pos[i]);
  rep.T_min = *std::min_element(tvals.begin(), tvals.end());
  double cqi = 1.0;
  double run_max = 0.0;
  for (size_t i = 0; i + 1 < pos.size(); ++i) {
    run_max = std::max(run_max, tvals[i]);
    cqi = std::max(cqi, run_max / tvals[i + 1]);
  }
  rep.quasi_increase_C = cqi;
  rep.condition_flags["d"] = rep.T_min > 1.0 && cqi < 100.0;

  // (e) Q''/|Q'| versus |Q'|/Q: bounded above everywhere, below for |x| >= K.
  {
    double sup_ratio = 0, inf_tail = std::numeric_limits<double>::infinity();
    for (double x : pos) {
      double q0 = eval_Q(spec, x), q1 = q_deriv(spec, x, 1), q2 = q_deriv(spec, x, 2);
      double ratio = q2 * q0 / (q1 * q1);
      sup_ratio = std::max(sup_ratio, ratio);
      if (x >= rep.K) inf_tail = std::min(inf_tail, ratio);
    }
    rep.condition_flags["e"] = std::isfinite(sup_ratio) && sup_ratio < 100.0 && inf_tail > 1e-4;
  }

  // Definition-2.1 ratios for |x| >= K (only meaningful for r >= 1).
  {
    double lam_hat = 0;
    for (double x : tail) lam_hat = std::max(lam_hat, std::fabs(q_deriv(spec, x, 1)) / std::pow(eval_Q(spec, x), lambda));
    rep.lambda_hat = lam_hat;
    rep.condition_flags["ratio_lambda"] = std::isfinite(lam_hat) && lam_hat < 1e6;

    auto deriv_ratio = [&](double x, int k) {
      return std::fabs(q_deriv(spec, x, k + 1) / q_deriv(spec, x, k));
    };
    bool equiv_ok = true;
    for (int k = 2; k <= r; ++k) {
      // Vacuous when Q^(k+1) vanishes identically (polynomial exponent).
      double scale = sup_abs_deriv(spec, tail, k);
      if (sup_abs_deriv(spec, tail, k + 1) <= 1e-14 * std::max(1.0, scale)) continue;
      double lo = std::numeric_limits<double>::infinity(), hi = 0;
      for (double x : tail) {
        double rr = deriv_ratio(x, k) / deriv_ratio(x, 1);
        lo = std::min(lo, rr);
        hi = std::max(hi, rr);
      }
      equiv_ok = equiv_ok && lo > 1e-2 && hi < 1e2;
    }
    rep.condition_flags["ratio_equiv"] = equiv_ok;

    bool top_ok = true;
    if (sup_abs_deriv(spec, tail, r + 2) > 1e-14 * std::max(1.0, sup_abs_deriv(spec, tail, r + 1))) {
      double hi = 0;
      for (double x : tail) hi = std::max(hi, deriv_ratio(x, r + 1) / deriv_ratio(x, r));
      top_ok = std::isfinite(hi) && hi < 1e2;
    }
    rep.condition_flags["ratio_top"] = top_ok;
  }

  return rep;
}

std::vector<double> standard_grid(const WeightSpec& spec, int points_per_side) {
  // Largest abscissa with Q <= 1e10, so every ratio stays representable.
  double hi = 1.0;
  while (hi < 1e6 && eval_Q(spec, 2.0 * hi) <= 1e10) hi *= 2.0;
  double lo_b = hi, hi_b = std::min(1e6, 2.0 * hi);
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo_b + hi_b);
    (eval_Q(spec, mid) <= 1e10 ? lo_b : hi_b) = mid;
  }
  const double x_max = lo_b, x_min = 1e-3;
  std::vector<double> g;
  g.reserve(2 * points_per_side);
  const double ratio = std::pow(x_max / x_min, 1.0 / (points_per_side - 1));
  for (int i = 0; i < points_per_side; ++i) g.push_back(x_min * std::pow(ratio, i));
  g.back() = x_max;
  std::vector<double> full;
  full.reserve(2 * g.size());
  for (auto it = g.rbegin(); it != g.rend(); ++it) full.push_back(-*it);
  for (double x : g) full.push_back(x);
  return full;
}

}  // namespace wpa
