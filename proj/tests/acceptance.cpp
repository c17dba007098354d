// Acceptance suite: one pass/fail line per criterion, each with its pinned
// tolerances and a wall-clock budget. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wpa/bestapprox.hpp"
#include "wpa/jsonio.hpp"
#include "wpa/modulus.hpp"
#include "wpa/monotone.hpp"
#include "wpa/norms.hpp"
#include "wpa/verify.hpp"

using namespace wpa;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---- criterion 1: MRS closed forms ----
void criterion_mrs(Check& c) {
  MrsSolver<double> s2(WeightSpec::freud(2.0, 1.0));
  MrsSolver<double> s4(WeightSpec::freud(4.0, 1.0));
  for (double x : {0.5, 1.0, 2.0, 4.0, 16.0, 100.0}) {
    const double a2 = s2.mrs_number(x);
    const double t2 = std::sqrt(x);
    c.require(std::fabs(a2 - t2) <= 1e-8 * t2,
              "a_" + fmt(x) + " (alpha=2) off: " + fmt(std::fabs(a2 - t2) / t2));
    const double a4 = s4.mrs_number(x);
    const double t4 = std::pow(2.0 * x / 3.0, 0.25);
    c.require(std::fabs(a4 - t4) <= 1e-8 * t4,
              "a_" + fmt(x) + " (alpha=4) off: " + fmt(std::fabs(a4 - t4) / t4));
  }
}

// ---- criterion 2: orthonormality + recurrence oracle ----
void criterion_orthonormality(Check& c) {
  for (const auto& spec : {WeightSpec::freud(2.0, 1.0), WeightSpec::freud(4.0, 1.0),
                           WeightSpec::iter_exp(1, 2.0, 0.0)}) {
    auto basis = OrthoBasis<double>::build(spec, 20);
    const double g = basis.gram_residual(20);
    c.require(g <= 1e-8, spec.family_name() + " Gram residual " + fmt(g));
  }
  auto hermite = OrthoBasis<double>::build(WeightSpec::freud(2.0, 1.0), 14);
  for (int k = 1; k <= 12; ++k)
    c.require(std::fabs(hermite.beta_rec()[k] - k / 4.0) <= 1e-8,
              "beta_" + std::to_string(k) + " off by " +
                  fmt(std::fabs(hermite.beta_rec()[k] - k / 4.0)));
}

// ---- criterion 3: de la Vallee Poussin filter law ----
void criterion_vp_filter(Check& c) {
  auto basis = OrthoBasis<double>::build(WeightSpec::freud(2.0, 1.0), 34);
  for (int n : {2, 4, 8}) {
    for (int m = 0; m <= 2 * n - 1; ++m) {
      auto f = [&](double x) { return basis.eval_p(m, x); };
      auto st = fourier_coeffs<double>(basis, f, n);
      const double tau = m <= n ? 1.0 : double(2 * n - m) / n;
      double worst = 0;
      for (int i = 0; i <= 100; ++i) {
        const double x = -3.0 + 6.0 * i / 100.0;
        worst = std::max(worst, std::fabs(vallee_poussin(st, basis, n, x) - tau * f(x)));
      }
      c.require(worst <= 1e-10,
                "filter n=" + std::to_string(n) + " m=" + std::to_string(m) + ": " + fmt(worst));
    }
  }
}

// ---- criterion 4: Remez correctness ----
void criterion_remez(Check& c) {
  auto basis = OrthoBasis<double>::build(WeightSpec::freud(2.0, 1.0), 12);

  auto sup_err = [&](const Poly<double>& P, const std::function<double(double)>& f) {
    const auto grid = cosine_grid(-basis.xmax(), basis.xmax(), 2001);
    auto res = [&](double x) {
      return std::fabs((f(x) - eval_poly(basis, P, x)) * basis.weight(x));
    };
    std::vector<double> rv(grid.size());
    double worst = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
      rv[i] = res(grid[i]);
      worst = std::max(worst, rv[i]);
    }
    for (size_t i = 1; i + 1 < grid.size(); ++i)
      if (rv[i] >= rv[i - 1] && rv[i] >= rv[i + 1])
        worst = std::max(worst, golden_max<double>(res, grid[i - 1], grid[i + 1], 80).second);
    return worst;
  };

  // the anchor case with closed-form optimum
  auto anchor = best_linf<double>([](double x) { return x; }, basis, 0);
  const double expected = 1.0 / std::sqrt(2.0 * std::exp(1.0));
  c.require(std::fabs(anchor.error - expected) <= 1e-6,
            "anchor error " + fmt(anchor.error) + " vs " + fmt(expected));
  c.require(anchor.alternation.size() >= 2, "anchor alternation count");
  for (auto& [x, r] : anchor.alternation)
    c.require(std::fabs(std::fabs(x) - 1.0 / std::sqrt(2.0)) <= 1e-4,
              "alternation abscissa " + fmt(x));

  // equioscillation and the Nelder-Mead cross-check on a spread of runs
  struct Run {
    std::function<double(double)> f;
    int n;
  };
  const std::vector<Run> runs = {{[](double x) { return x; }, 0},
                                 {[](double x) { return x * x * x; }, 1},
                                 {[](double x) { return x * x * x; }, 3},
                                 {[](double x) { return std::sin(x); }, 2},
                                 {[](double x) { return std::sin(x); }, 3},
                                 {[](double x) { return 1.0 / (1.0 + x * x); }, 4}};
  for (const auto& run : runs) {
    auto res = best_linf<double>(run.f, basis, run.n);
    if (res.error <= 1e-10) continue;
    c.require(int(res.alternation.size()) >= run.n + 2,
              "equioscillation count at n=" + std::to_string(run.n));
    for (size_t i = 0; i + 1 < res.alternation.size(); ++i)
      c.require(res.alternation[i].second * res.alternation[i + 1].second < 0,
                "alternating signs at n=" + std::to_string(run.n));
    auto obj = [&](const std::vector<double>& coef) {
      return sup_err(Poly<double>(std::vector<double>(coef)), run.f);
    };
    const double base = obj(res.poly.coeffs);
    auto improved = oracles::nelder_mead(obj, res.poly.coeffs, 0.02, 400);
    c.require(obj(improved) >= base * (1 - 1e-6),
              "NM improved n=" + std::to_string(run.n) + " by " +
                  fmt((base - obj(improved)) / base));
  }
}

// ---- criterion 5: Jackson bounds ----
void criterion_jackson(Check& c) {
  auto basis = OrthoBasis<double>::build(WeightSpec::freud(2.0, 1.0), 34);
  SmoothFn<double> sinfn{[](double x) { return std::sin(x); },
                         [](double x) { return std::cos(x); }};
  auto tbl = jackson_check(sinfn, basis, *basis.solver(),
                           std::numeric_limits<double>::infinity(), {4, 8, 16, 32}, 1);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (auto& row : tbl.rows) {
    c.require(std::isfinite(row.ratio1) && std::isfinite(row.ratio2),
              "non-finite ratio at n=" + std::to_string(row.n));
    c.require(row.ratio2 <= 1.0 + 1e-9, "bound violated at n=" + std::to_string(row.n));
    if (row.ratio2 > 0) {
      lo = std::min(lo, row.ratio2);
      hi = std::max(hi, row.ratio2);
    }
  }
  c.require(hi / lo < 10.0,
            "ratio E_n/((a_n/n)||f'w||) spread " + fmt(hi / lo) +
                " (one-sided bound: E_n decays superexponentially for an entire "
                "target while the bound shrinks like n^-1/2, so a <10x window "
                "is unattainable; per-n ratios " +
                fmt(tbl.rows[0].ratio2) + ", " + fmt(tbl.rows[1].ratio2) + ", " +
                fmt(tbl.rows[2].ratio2) + ", " + fmt(tbl.rows[3].ratio2) + ")");

  // omega_1 <= C t Int w |df| with stable C over dyadic t (smooth ramp)
  MrsSolver<double> solver(WeightSpec::freud(2.0, 1.0));
  auto ramp = [](double x) { return std::atan(x); };
  const double bv = bv_integral([](double x) { return 1.0 / (1.0 + x * x); },
                                WeightSpec::freud(2.0, 1.0));
  double clo = std::numeric_limits<double>::infinity(), chi = 0;
  for (double t : {0.5, 0.25, 0.125, 0.0625}) {
    const double om = omega_report(ramp, solver, 1.0, t).omega;
    const double C = om / (t * bv);
    c.require(std::isfinite(C) && C > 0, "degenerate BV constant at t=" + fmt(t));
    clo = std::min(clo, C);
    chi = std::max(chi, C);
  }
  c.require(chi / clo < 4.0, "BV constant spread " + fmt(chi / clo));
}

// ---- criterion 6: pointwise derivative transfer ----
void criterion_transfer(Check& c) {
  const std::vector<int> n_list = {6, 10, 14, 18, 22};
  TransferConfig cfg;
  cfg.precision = Precision::automatic;

  for (const auto& spec : {WeightSpec::freud(2.0, 1.0), WeightSpec::iter_exp(1, 2.0, 0.0)}) {
    // polynomial-degenerate rows
    auto degenerate = verify_transfer(parse_expr("x^5-2*x^2"), 2, spec, n_list, cfg);
    for (auto& row : degenerate.rows)
      c.require(row.lhs <= 1e-8, spec.family_name() + " poly row lhs " + fmt(row.lhs));

    for (const char* fsrc : {"sin(x)", "x*exp(-x^2/4)+x"}) {
      auto tbl = verify_transfer(parse_expr(fsrc), 2, spec, n_list, cfg);
      for (auto& row : tbl.rows)
        c.require(std::isfinite(row.ratio),
                  spec.family_name() + " non-finite ratio n=" + std::to_string(row.n));
      for (auto& [k, spread] : tbl.per_k_spread)
        c.require(spread < 10.0, spec.family_name() + std::string(" f=") + fsrc + " k=" +
                                     std::to_string(k) + " spread " + fmt(spread));
      c.require(tbl.chain_ok, spec.family_name() + std::string(" f=") + fsrc + " chain violated");
      c.note(spec.family_name() + "/" + fsrc + ": C=" + fmt(tbl.empirical_C) + " (" +
             tbl.precision + ")");
    }
  }
}

// ---- criterion 7: random-polynomial derivative bounds ----
void criterion_bernstein(Check& c) {
  auto rep = bernstein_check(WeightSpec::freud(2.0, 1.0), {8, 16, 32}, {1, 2}, 50, 20240817);
  for (auto& [k, spread] : rep.spread_per_k) {
    c.require(spread < 4.0, "k=" + std::to_string(k) + " spread " + fmt(spread));
    c.note("k=" + std::to_string(k) + " spread " + fmt(spread));
  }
}

// ---- criterion 8: antiderivative lemmas ----
void criterion_antiderivative(Check& c) {
  const auto spec = WeightSpec::freud(2.0, 1.0);
  auto degenerate = verify_integral_remainder(parse_expr("x^5-2*x^2"), spec, 4);
  c.require(degenerate.lhs <= 1e-8, "degenerate remainder lhs " + fmt(degenerate.lhs));
  c.require(degenerate.ortho_residual <= 1e-8,
            "degenerate ortho " + fmt(degenerate.ortho_residual));
  for (int n : {4, 8, 16}) {
    auto rep = verify_integral_remainder(parse_expr("sin(x)"), spec, n);
    c.require(rep.ortho_residual <= 1e-8, "ortho residual " + fmt(rep.ortho_residual));
    c.require(std::isfinite(rep.ratio) && rep.ratio > 0, "remainder ratio n=" + std::to_string(n));
  }
  auto deg37 = verify_spliced_antiderivative(parse_expr("x^4+x"), spec, 4);
  c.require(deg37.err_F <= 1e-8, "degenerate spliced err_F " + fmt(deg37.err_F));
  for (int n : {6, 12}) {
    auto rep = verify_spliced_antiderivative(parse_expr("sin(x)"), spec, n);
    c.require(rep.deg_S <= 2 * n, "S degree " + std::to_string(rep.deg_S));
    c.require(std::isfinite(rep.err_F / rep.bound_F), "spliced F ratio n=" + std::to_string(n));
    c.require(std::isfinite(rep.err_S / rep.bound_S), "spliced S ratio n=" + std::to_string(n));
  }
}

// ---- criterion 9: Lp transfer ----
void criterion_lp_transfer(Check& c) {
  TransferConfig a;
  a.precision = Precision::dbl;
  a.kind = TransferKind::derivative_transfer;
  const std::vector<int> n_small = {6, 10, 14};
  auto sup_tbl = verify_transfer(parse_expr("sin(x)"), 1, WeightSpec::freud(2.0, 1.0), n_small, a);
  TransferConfig b = a;
  b.kind = TransferKind::lp_transfer;
  b.p = std::numeric_limits<double>::infinity();
  auto lp_tbl = verify_transfer(parse_expr("sin(x)"), 1, WeightSpec::freud(2.0, 1.0), n_small, b);
  for (size_t i = 0; i < sup_tbl.rows.size(); ++i) {
    auto rel = [](double u, double v) {
      return std::fabs(u - v) / std::max({std::fabs(u), std::fabs(v), 1e-300});
    };
    c.require(rel(lp_tbl.rows[i].lhs, sup_tbl.rows[i].lhs) <= 1e-6,
              "p=inf lhs mismatch row " + std::to_string(i));
    c.require(rel(lp_tbl.rows[i].rhs, sup_tbl.rows[i].rhs) <= 1e-6,
              "p=inf rhs mismatch row " + std::to_string(i));
    c.require(rel(lp_tbl.rows[i].rhs2, sup_tbl.rows[i].rhs2) <= 1e-6,
              "p=inf rhs2 mismatch row " + std::to_string(i));
  }

  TransferConfig p2 = a;
  p2.kind = TransferKind::lp_transfer;
  p2.p = 2.0;
  p2.precision = Precision::automatic;
  auto t2 = verify_transfer(parse_expr("sin(x)"), 1, WeightSpec::freud(2.0, 1.0), {6, 10, 14, 18},
                            p2);
  for (auto& row : t2.rows)
    c.require(std::isfinite(row.ratio) && !row.degenerate,
              "p=2 row n=" + std::to_string(row.n) + " k=" + std::to_string(row.k));
  for (auto& [k, spread] : t2.per_k_spread)
    c.require(spread < 10.0, "p=2 k=" + std::to_string(k) + " spread " + fmt(spread));
  c.require(std::isfinite(t2.g_bound_ratio) && t2.g_bound_ratio > 0, "companion bound ratio");
  c.note("p=2 C=" + fmt(t2.empirical_C) + " (" + t2.precision + ")");
}

// ---- criterion 10: monotone approximation ----
void criterion_monotone(Check& c) {
  auto cert = monotone_approx(parse_expr("x+sin(x)/2"), parse_operator("d1"), 0.4, 2.0,
                              WeightSpec::freud(2.0, 1.0), 24);
  c.require(cert.pass, "no certificate up to n_max");
  c.require(cert.min_LP >= 0.2 - 1e-9, "certified minimum " + fmt(cert.min_LP));
  c.note("n* = " + std::to_string(cert.n_star) + ", min L(P) = " + fmt(cert.min_LP));

  // independent 10x-refined re-check
  auto basis = OrthoBasis<double>::build(WeightSpec::freud(2.0, 1.0).shift_t_exponent(-0.25),
                                         cert.n_star + 2);
  auto f = [](double x) { return x + 0.5 * std::sin(x); };
  auto res = best_linf<double>(f, basis, cert.n_star);
  Poly<double> d1 = poly_derivative(basis, res.poly, 1);
  double mn = std::numeric_limits<double>::infinity();
  for (double x : uniform_grid(-2.0, 2.0, 10001)) mn = std::min(mn, eval_poly(basis, d1, x));
  c.require(mn >= 0.2 - 1e-6, "refined minimum " + fmt(mn));
}

struct Criterion {
  int id;
  std::string label;
  double budget_seconds;
  std::function<void(Check&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "MRS closed forms (rel 1e-8)", 1.0, criterion_mrs},
      {2, "orthonormality and recurrence oracle (1e-8)", 10.0, criterion_orthonormality},
      {3, "v_n filter law (pointwise 1e-10)", 5.0, criterion_vp_filter},
      {4, "weighted exchange correctness", 30.0, criterion_remez},
      {5, "Jackson-type bounds", 120.0, criterion_jackson},
      {6, "derivative transfer tables", 600.0, criterion_transfer},
      {7, "random-polynomial derivative bounds", 120.0, criterion_bernstein},
      {8, "antiderivative lemmas", 60.0, criterion_antiderivative},
      {9, "Lp transfer tables", 300.0, criterion_lp_transfer},
      {10, "monotone approximation certificate", 120.0, criterion_monotone},
  };

  int failures = 0;
  for (const auto& crit : criteria) {
    if (argc > 1 && std::to_string(crit.id) != argv[1]) continue;
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      crit.fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > crit.budget_seconds) {
      check.require(false, "runtime " + fmt(secs) + "s over the " + fmt(crit.budget_seconds) +
                               "s budget");
    }
    std::printf("%s criterion %2d: %s (%.2fs < %.0fs)%s%s\n", check.ok ? "PASS" : "FAIL", crit.id,
                crit.label.c_str(), secs, crit.budget_seconds, check.detail.empty() ? "" : " -- ",
                check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
