#include "wpa/modulus.hpp"

#include <algorithm>
#include <cmath>

#include "wpa/bestapprox.hpp"
#include "wpa/norms.hpp"

namespace wpa {

double x_at_Q(const WeightSpec& spec, double q_target) {
  double hi = 1.0;
  while (eval_Q(spec, hi) < q_target && hi < 1e150) hi *= 2.0;
  double lo = hi / 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (eval_Q(spec, mid) < q_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double region_norm(const std::function<double(double)>& g, double a, double b, double p,
                   bool two_sided) {
  if (!(b > a)) return 0.0;
  if (std::isinf(p))
    return two_sided ? sup_two_sided<double>(g, a, b) : sup_on_grid<double>(g, uniform_grid(a, b, 1501));
  return two_sided ? lp_two_sided<double>(g, a, b, p, 32, 16)
                   : lp_on_interval<double>(g, a, b, p, 32, 16);
}

}  // namespace

ModulusReport omega_report(const std::function<double(double)>& f, const MrsSolver<double>& solver,
                           double p, double t, int h_samples) {
  if (!(t > 0)) throw Error("modulus", errc::domain_error, "omega needs t > 0");
  if (h_samples < 2) h_samples = 2;
  const WeightSpec& spec = solver.spec();

  ModulusReport rep;
  rep.t = t;
  rep.p = p;
  rep.sigma_2t = solver.sigma(2 * t);
  rep.sigma_4t = solver.sigma(4 * t);

  // Phi_t with sigma(t) and T(sigma(t)) frozen once.
  const double sig_t = solver.sigma(t);
  const double t_inv_sqrt = 1.0 / std::sqrt(eval_T(spec, sig_t));
  auto phi = [&](double x) { return std::sqrt(std::fabs(1.0 - std::fabs(x) / sig_t)) + t_inv_sqrt; };

  // main term: sup over a geometric h grid of the shifted-difference norm
  double main = 0;
  for (int j = 0; j < h_samples; ++j) {
    const double h = t * std::pow(0.01, 1.0 - double(j) / (h_samples - 1));
    auto g = [&](double x) {
      const double d = 0.5 * h * phi(x);
      return eval_w(spec, x) * (f(x + d) - f(x - d));
    };
    main = std::max(main, region_norm(g, -rep.sigma_2t, rep.sigma_2t, p, false));
  }
  rep.main_term = main;

  // tail term: golden-section over the constant (the map is convex in c)
  const double X_tail = x_at_Q(spec, 250.0);
  if (rep.sigma_4t < X_tail) {
    double flo = f(rep.sigma_4t), fhi = flo;
    for (double x : uniform_grid(rep.sigma_4t, X_tail, 257)) {
      for (double s : {x, -x}) {
        flo = std::min(flo, f(s));
        fhi = std::max(fhi, f(s));
      }
    }
    const double pad = 0.1 * (fhi - flo) + 1e-12;
    auto tail_norm = [&](double c) {
      auto g = [&](double x) { return eval_w(spec, x) * (f(x) - c); };
      return region_norm(g, rep.sigma_4t, X_tail, p, true);
    };
    auto [c_star, v] = golden_min<double>(tail_norm, flo - pad, fhi + pad, 200);
    rep.best_c = c_star;
    rep.tail_term = v;
  }
  rep.omega = rep.main_term + rep.tail_term;
  return rep;
}

double bv_integral(const std::function<double(double)>& f_prime, const WeightSpec& spec) {
  const double X = x_at_Q(spec, 250.0);
  auto g = [&](double x) { return eval_w(spec, x) * std::fabs(f_prime(x)); };
  double peak = 0;
  for (double x : uniform_grid(0.0, X, 1001)) peak = std::max({peak, g(x), g(-x)});
  if (std::max(g(X), g(-X)) > 1e-8 * std::max(peak, 1e-300))
    throw Error("modulus", errc::norm_diverges,
                "w |f'| has not decayed at the integration boundary");
  QuadRule<double> q = composite_rule(cosine_breakpoints(-X, X, 64), 16);
  double s = q.integrate(g);
  if (!std::isfinite(s)) throw Error("modulus", errc::norm_diverges, "integral not finite");
  return s;
}

JacksonTable jackson_check(const SmoothFn<double>& f, const OrthoBasis<double>& basis,
                           const MrsSolver<double>& solver, double p,
                           const std::vector<int>& n_list, int k) {
  if (f.max_order() < k)
    throw Error("modulus", errc::order_unavailable, "jackson_check needs f^(k)");
  JacksonTable tbl;
  tbl.k = k;
  tbl.p = p;
  const WeightSpec& spec = basis.spec();
  const double X = basis.xmax();
  auto fkw = [&](double x) { return f.deriv(k, x) * eval_w(spec, x); };
  const double norm_fk = std::isinf(p) ? sup_two_sided<double>(fkw, 0.0, X, 2001)
                                       : lp_two_sided<double>(fkw, 0.0, X, p, 48, 16);
  for (int n : n_list) {
    JacksonRow row;
    row.n = n;
    row.a_n = solver.mrs_number(double(n));
    row.E = E_value<double>(f.d[0], basis, n, p);
    row.omega = omega_report(f.d[0], solver, p, row.a_n / n).omega;
    row.bound = std::pow(row.a_n / n, k) * norm_fk;
    row.ratio1 = row.omega > 0 ? row.E / row.omega : 0.0;
    row.ratio2 = row.bound > 0 ? row.E / row.bound : 0.0;
    if (!std::isfinite(row.ratio1) || !std::isfinite(row.ratio2))
      throw Error("modulus", errc::norm_diverges, "jackson ratio not finite");
    tbl.rows.push_back(row);
  }
  return tbl;
}

OmegaDecayReport omega_vanishes_check(const std::function<double(double)>& f,
                                      const MrsSolver<double>& solver,
                                      const std::vector<double>& t_list) {
  for (size_t i = 0; i + 1 < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i + 1]))
      throw Error("modulus", errc::domain_error, "t_list must be decreasing");
  const WeightSpec& spec = solver.spec();
  const double X = x_at_Q(spec, 250.0);
  auto stwf = [&](double x) { return std::sqrt(eval_T(spec, x)) * eval_w(spec, x) * f(x); };
  const double total = sup_two_sided<double>(stwf, 0.0, X, 2001);
  const double boundary = sup_two_sided<double>(stwf, 0.9 * X, X, 257);
  if (boundary > 1e-3 * std::max(total, 1e-300))
    throw Error("modulus", errc::precondition_fail,
                "sqrt(T) w f does not vanish toward the boundary");

  OmegaDecayReport rep;
  rep.t_list = t_list;
  for (double t : t_list)
    rep.omega_values.push_back(
        omega_report(f, solver, std::numeric_limits<double>::infinity(), t).omega);
  rep.pass = rep.omega_values.back() <= 0.1 * rep.omega_values.front() + 1e-15;
  return rep;
}

}  // namespace wpa
