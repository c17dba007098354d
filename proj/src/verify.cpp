#include "wpa/verify.hpp"

#include <algorithm>
#include <future>
#include <mutex>
#include <random>

namespace wpa {

namespace {

template <class R>
using BasisPtr = std::shared_ptr<OrthoBasis<R>>;

struct Cell {
  std::vector<RatioRow> rows;
};

// Build-once cache of bases keyed by the weight spec; synchronized so the
// parallel degree sweep can share it.
template <class R>
class BasisSet {
 public:
  explicit BasisSet(int nmax) : nmax_(nmax) {}
  OrthoBasis<R>& get(const WeightSpec& s) {
    const std::string key = s.cache_key();
    std::lock_guard<std::mutex> lk(mu_);
    auto it = bases_.find(key);
    if (it == bases_.end())
      it = bases_.emplace(key, std::make_shared<OrthoBasis<R>>(OrthoBasis<R>::build(s, nmax_)))
               .first;
    return *it->second;
  }

 private:
  int nmax_;
  std::map<std::string, BasisPtr<R>> bases_;
  std::mutex mu_;
};

struct EngineWeights {
  WeightSpec approx(int k) const {
    switch (kind) {
      case TransferKind::derivative_transfer:
      case TransferKind::lp_transfer: return spec;
      case TransferKind::transfer_shift_minus: return shifted(-0.25);
      case TransferKind::transfer_shift_per_k: return shifted(0.5 * k);
    }
    return spec;
  }
  WeightSpec lhs(int k) const {
    switch (kind) {
      case TransferKind::derivative_transfer: return shifted(-0.5 * k);
      case TransferKind::transfer_shift_minus: return shifted(-(2.0 * k + 1) / 4.0);
      case TransferKind::transfer_shift_per_k: return spec;
      case TransferKind::lp_transfer: {
        WeightSpec s = shifted(-0.5 * k);
        LpFlavor fl;
        fl.p = p;
        fl.beta = beta;
        fl.sign = LpFlavor::Sign::sharp;
        s.lp_flavor = fl;
        return s;
      }
    }
    return spec;
  }
  WeightSpec rhs(int k) const {
    switch (kind) {
      case TransferKind::derivative_transfer:
      case TransferKind::lp_transfer: return shifted(0.25);
      case TransferKind::transfer_shift_minus: return spec;
      case TransferKind::transfer_shift_per_k: return shifted((2.0 * k + 1) / 4.0);
    }
    return spec;
  }
  WeightSpec hypothesis(int r) const {
    switch (kind) {
      case TransferKind::derivative_transfer:
      case TransferKind::lp_transfer: return shifted(0.25);
      case TransferKind::transfer_shift_minus: return spec;
      case TransferKind::transfer_shift_per_k: return shifted((2.0 * r + 1) / 4.0);
    }
    return spec;
  }
  WeightSpec shifted(double d) const {
    return (collapse || d == 0.0) ? spec : spec.shift_t_exponent(d);
  }

  TransferKind kind;
  WeightSpec spec;
  bool collapse = false;
  double p = std::numeric_limits<double>::infinity();
  double beta = 1.5;
};

template <class R>
RatioTable transfer_engine(const ExprPtr& fe, int r, const WeightSpec& spec0,
                           const std::vector<int>& n_list, const TransferConfig& cfg) {
  if (n_list.empty()) throw Error("theoremlab", errc::bad_config, "empty n list");
  for (int n : n_list)
    if (n <= r)
      throw Error("theoremlab", errc::bad_config, "n_list entries must exceed r");
  WeightSpec spec = spec0;
  spec.validate();

  EngineWeights W;
  W.kind = cfg.kind;
  W.spec = spec;
  W.collapse = cfg.collapse_freud && spec.is_freud_type();
  W.p = cfg.p;
  W.beta = cfg.beta;

  const double p_norm =
      cfg.kind == TransferKind::lp_transfer ? cfg.p : std::numeric_limits<double>::infinity();
  const int max_n = *std::max_element(n_list.begin(), n_list.end());
  const int nmax = max_n + 2;

  SmoothFn<R> f = make_smooth_fn<R>(fe, r);
  BasisSet<R> bases(nmax);
  OrthoBasis<R>& wbasis = bases.get(spec);
  const MrsSolver<R>& solver = *wbasis.solver();
  const R X = wbasis.xmax();

  // scale and hypothesis check
  const std::vector<R> wide_grid = harness_grid(solver, max_n, X, cfg.interior_points,
                                                cfg.tail_points);
  R scale = 0;
  for (R x : wide_grid) scale = std::max<R>(scale, num::fabs(f(x) * eval_w(spec, x)));
  if (!(scale > R(0))) scale = 1;
  {
    const WeightSpec hs = W.hypothesis(r);
    R interior = 0, boundary = 0;
    for (R x : wide_grid)
      interior = std::max<R>(interior, num::fabs(f.deriv(r, x)) * eval_w(hs, x));
    for (int j = 0; j <= 16; ++j) {
      R x = X * (R(0.9) + R(0.1) * R(j) / 16);
      boundary = std::max<R>(boundary, num::fabs(f.deriv(r, x)) * eval_w(hs, x));
      boundary = std::max<R>(boundary, num::fabs(f.deriv(r, -x)) * eval_w(hs, x));
    }
    if (boundary > R(1e-3) * std::max<R>(interior, scale * num::eps<R>()))
      throw Error("theoremlab", errc::hypothesis_fail,
                  "weighted f^(r) does not decay at the truncation boundary");
  }
  // touch every basis and lazy matrix before the parallel sweep
  for (int k = 0; k <= r; ++k) {
    bases.get(W.approx(k)).dmat();
    bases.get(W.rhs(k));
  }

  auto run_cell = [&](int n) {
    Cell cell;
    const R a_n = solver.mrs_number(R(n));
    const R an_over_n = a_n / R(n);
    std::map<std::string, ApproxResult<R>> approximants;
    std::map<std::string, R> evals;  // E-value memo: key basis|deriv|degree
    auto e_value = [&](const WeightSpec& s, int deriv, int degree) {
      OrthoBasis<R>& b = bases.get(s);
      std::string key = s.cache_key() + "|" + std::to_string(deriv) + "|" + std::to_string(degree);
      auto it = evals.find(key);
      if (it != evals.end()) return it->second;
      std::function<R(R)> g = [&f, deriv](R x) { return f.deriv(deriv, x); };
      R v = best_approx<R>(g, b, degree, p_norm).error;
      evals.emplace(key, v);
      return v;
    };
    for (int k = 0; k <= r; ++k) {
      const WeightSpec as = W.approx(k);
      OrthoBasis<R>& ab = bases.get(as);
      auto it = approximants.find(as.cache_key());
      if (it == approximants.end()) {
        std::function<R(R)> g = [&f](R x) { return f(x); };
        it = approximants.emplace(as.cache_key(), best_approx<R>(g, ab, n, p_norm)).first;
      }
      const Poly<R> Pk = poly_derivative(ab, it->second.poly, k);
      const WeightSpec ls = W.lhs(k);
      auto integrand = [&](R x) {
        return (f.deriv(k, x) - eval_poly(ab, Pk, x)) * eval_w(ls, x);
      };
      RatioRow row;
      row.n = n;
      row.k = k;
      row.p = p_norm;
      if (std::isinf(p_norm)) {
        const std::vector<R> grid = harness_grid(solver, n, ab.xmax(), cfg.interior_points,
                                                 cfg.tail_points);
        row.lhs = num::to_double(sup_on_grid<R>(integrand, grid));
      } else {
        row.lhs = num::to_double(lp_two_sided<R>(integrand, R(0), ab.xmax(), p_norm, 48, 16));
      }
      const WeightSpec rs = W.rhs(k);
      row.rhs = num::to_double(e_value(rs, k, n - k));
      R pw = 1;
      for (int j = 0; j < r - k; ++j) pw *= an_over_n;
      row.rhs2 = num::to_double(pw * e_value(rs, r, n - r));
      cell.rows.push_back(row);
    }
    return cell;
  };

  std::vector<Cell> cells(n_list.size());
  {
    std::vector<std::future<Cell>> fut;
    fut.reserve(n_list.size());
    for (int n : n_list)
      fut.push_back(std::async(std::launch::async, [&run_cell, n] { return run_cell(n); }));
    for (size_t i = 0; i < fut.size(); ++i) cells[i] = fut[i].get();
  }

  RatioTable tbl;
  tbl.precision = detail::precision_tag<R>::name;
  tbl.scale = num::to_double(scale);
  // degeneracy floor: a few decades above the working-precision noise level
  const double floor = std::max(1e3 * num::to_double(num::eps<R>()), 1e-30) * tbl.scale;
  for (auto& c : cells)
    for (auto& row : c.rows) {
      RatioRow rr = row;
      rr.degenerate = rr.rhs <= floor;
      rr.ratio = rr.degenerate ? 0.0 : rr.lhs / rr.rhs;
      tbl.rows.push_back(rr);
    }
  std::sort(tbl.rows.begin(), tbl.rows.end(), [](const RatioRow& a, const RatioRow& b) {
    return a.n != b.n ? a.n < b.n : a.k < b.k;
  });

  tbl.empirical_C = 0;
  tbl.chain_ok = true;
  for (auto& row : tbl.rows) {
    tbl.empirical_C = std::max(tbl.empirical_C, row.ratio);
    if (row.rhs2 > floor) {
      if (!(row.rhs <= row.rhs2 * (1.0 + 1e-6))) tbl.chain_ok = false;
    } else if (!(row.rhs <= floor * 2)) {
      tbl.chain_ok = false;
    }
  }
  bool stable = true;
  for (int k = 0; k <= r; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    int live = 0;
    for (auto& row : tbl.rows)
      if (row.k == k && !row.degenerate) {
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
        ++live;
      }
    double spread = live >= 2 ? hi / lo : 1.0;
    tbl.per_k_spread[k] = spread;
    stable = stable && spread < tbl.stability_threshold;
  }
  tbl.verdict = stable && tbl.chain_ok;

  // Lp companion bound (absolutely continuous g with g(0) = 0).
  if (cfg.kind == TransferKind::lp_transfer && r >= 1) {
    const R f0 = f(R(0));
    auto g44 = [&](R x) { return eval_Q(spec, x, 1) * eval_w(spec, x) * (f(x) - f0); };
    auto r44 = [&](R x) { return eval_w(spec, x) * f.deriv(1, x); };
    if (std::isinf(p_norm)) {
      tbl.g_bound_lhs = num::to_double(sup_on_grid<R>(g44, wide_grid));
      tbl.g_bound_rhs = num::to_double(sup_on_grid<R>(r44, wide_grid));
    } else {
      tbl.g_bound_lhs = num::to_double(lp_two_sided<R>(g44, R(0), X, p_norm, 48, 16));
      tbl.g_bound_rhs = num::to_double(lp_two_sided<R>(r44, R(0), X, p_norm, 48, 16));
    }
    tbl.g_bound_ratio = tbl.g_bound_rhs > 0 ? tbl.g_bound_lhs / tbl.g_bound_rhs : 0.0;
  }
  return tbl;
}

bool table_wants_quad(const RatioTable& t) {
  const double floor_all = 1e-10 * t.scale;
  bool all_degenerate = true;
  for (auto& r : t.rows)
    if (std::max({r.lhs, r.rhs, r.rhs2}) > floor_all) all_degenerate = false;
  if (all_degenerate) return false;
  const double resolvable = 1e-11 * t.scale;
  for (auto& r : t.rows)
    if (r.rhs < resolvable || r.rhs2 < resolvable) return true;
  return false;
}

}  // namespace

RatioTable verify_transfer(const ExprPtr& f, int r, const WeightSpec& spec,
                           const std::vector<int>& n_list, const TransferConfig& cfg) {
  if (cfg.precision == Precision::quad)
    return transfer_engine<__float128>(f, r, spec, n_list, cfg);
  RatioTable tbl = transfer_engine<double>(f, r, spec, n_list, cfg);
  if (cfg.precision == Precision::automatic && table_wants_quad(tbl))
    tbl = transfer_engine<__float128>(f, r, spec, n_list, cfg);
  return tbl;
}

IntegralRemainderReport verify_integral_remainder(const ExprPtr& f, const WeightSpec& spec,
                                                  int n) {
  if (n < 1) throw Error("theoremlab", errc::bad_config, "n must be >= 1");
  const int nmax = std::max(2 * n + 1, 4);
  OrthoBasis<double> basis = OrthoBasis<double>::build(spec, nmax);
  OrthoBasis<double> basis14 =
      OrthoBasis<double>::build(spec.shift_t_exponent(0.25), std::max(n + 1, 2));
  const auto& solver = *basis.solver();

  const ExprPtr fp = differentiate(f, 1);
  auto fprime = [&fp](double x) { return eval_expr(fp, x); };
  auto fval = [&f](double x) { return eval_expr(f, x); };

  FourierState<double> st = fourier_coeffs<double>(basis, fprime, n);
  Poly<double> V(vp_filtered_coeffs(st, n));

  IntegralRemainderReport rep;
  rep.n = n;

  // orthogonality of f' - v_n(f') against P_n, evaluated independently
  {
    const auto& q = basis.quad();
    std::vector<double> gvals(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
      double vn = 0;
      for (size_t k = 0; k < V.coeffs.size(); ++k) vn += V.coeffs[k] * basis.node_p(int(k), i);
      gvals[i] = fprime(q.nodes[i]) - vn;
    }
    double worst = 0;
    for (int j = 0; j <= n; ++j) {
      double s = 0;
      for (size_t i = 0; i < q.size(); ++i) s += basis.measure()[i] * gvals[i] * basis.node_p(j, i);
      worst = std::max(worst, std::fabs(s));
    }
    rep.ortho_residual = worst;
  }

  const Poly<double> IntV = poly_antiderivative(basis, V);
  const double f0 = fval(0.0);
  const std::vector<double> grid = harness_grid(solver, n, basis.xmax());
  rep.lhs = sup_on_grid<double>(
      [&](double x) { return basis.weight(x) * (fval(x) - f0 - eval_poly(basis, IntV, x)); },
      grid);
  const double a_n = solver.mrs_number(double(n));
  rep.rhs = (a_n / n) * best_linf<double>(fprime, basis14, n).error;
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

SplicedAntiderivativeReport verify_spliced_antiderivative(const ExprPtr& f, const WeightSpec& spec,
                                                          int n) {
  if (n < 1) throw Error("theoremlab", errc::bad_config, "n must be >= 1");
  const int nmax = std::max(2 * n + 1, 4);
  OrthoBasis<double> basis = OrthoBasis<double>::build(spec, nmax);
  OrthoBasis<double> basis14 =
      OrthoBasis<double>::build(spec.shift_t_exponent(0.25), std::max(n + 1, 2));
  const auto& solver = *basis.solver();

  const ExprPtr fp = differentiate(f, 1);
  auto fprime = [&fp](double x) { return eval_expr(fp, x); };
  auto fval = [&f](double x) { return eval_expr(f, x); };

  const Poly<double> q = best_linf<double>(fprime, basis, n - 1).poly;
  FourierState<double> st = fourier_coeffs<double>(basis, fprime, n);
  std::vector<double> diff = st.coeffs;  // f' - q_{n-1} in coefficients
  for (size_t k = 0; k < q.coeffs.size() && k < diff.size(); ++k) diff[k] -= q.coeffs[k];
  FourierState<double> st_diff;
  st_diff.n = n;
  st_diff.coeffs = diff;
  Poly<double> Sprime(vp_filtered_coeffs(st_diff, n));  // v_n(f' - q_{n-1})

  Poly<double> S = poly_antiderivative(basis, Sprime);
  S.coeffs[0] += fval(0.0) * std::sqrt(basis.beta_rec()[0]);  // + f(0)

  const Poly<double> IntQ = poly_antiderivative(basis, q);
  const std::vector<double> grid = harness_grid(solver, n, basis.xmax());

  SplicedAntiderivativeReport rep;
  rep.n = n;
  rep.deg_S = S.degree();
  rep.err_F = sup_on_grid<double>(
      [&](double x) {
        double F = fval(x) - eval_poly(basis, IntQ, x);
        return basis.weight(x) * (F - eval_poly(basis, S, x));
      },
      grid);
  const double a_n = solver.mrs_number(double(n));
  rep.bound_F = (a_n / n) * best_linf<double>(fprime, basis14, n).error;
  const Poly<double> Sd = poly_derivative(basis, S, 1);
  rep.err_S = sup_on_grid<double>(
      [&](double x) { return basis.weight(x) * eval_poly(basis, Sd, x); }, grid);
  rep.bound_S = best_linf<double>(fprime, basis14, n - 1).error;
  return rep;
}

BernsteinReport bernstein_check(const WeightSpec& spec, const std::vector<int>& n_list,
                                const std::vector<int>& k_list, int count, std::uint64_t seed) {
  const int max_n = *std::max_element(n_list.begin(), n_list.end());
  OrthoBasis<double> basis = OrthoBasis<double>::build(spec, max_n);
  const auto& solver = *basis.solver();

  std::mt19937_64 rng(seed);
  auto gauss = [&rng]() {
    // Box-Muller on explicit uniforms keeps the stream compiler-independent.
    double u1 = (double(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    double u2 = (double(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };

  BernsteinReport rep;
  for (int n : n_list) {
    const double a_n = solver.mrs_number(double(n));
    const std::vector<double> grid = harness_grid(solver, n, basis.xmax());
    std::map<int, double> emp;
    for (int trial = 0; trial < count; ++trial) {
      Poly<double> P;
      P.coeffs.resize(n + 1);
      for (auto& c : P.coeffs) c = gauss();
      for (int k : k_list) {
        Poly<double> Pk = poly_derivative(basis, P, k);
        double numv = sup_on_grid<double>(
            [&](double x) { return eval_poly(basis, Pk, x) * basis.weight(x); }, grid);
        double den = sup_on_grid<double>(
            [&](double x) {
              return std::pow(eval_T(spec, x), 0.5 * k) * eval_poly(basis, P, x) *
                     basis.weight(x);
            },
            grid);
        double bound = std::pow(n / a_n, k) * den;
        if (bound > 0) emp[k] = std::max(emp[k], numv / bound);
      }
    }
    for (int k : k_list) rep.rows.push_back({n, k, emp[k]});
  }
  rep.pass = true;
  for (int k : k_list) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (auto& row : rep.rows)
      if (row.k == k) {
        lo = std::min(lo, row.emp_C);
        hi = std::max(hi, row.emp_C);
      }
    rep.spread_per_k[k] = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.pass = rep.pass && rep.spread_per_k[k] < rep.threshold;
  }
  return rep;
}

VpBoundednessReport vp_boundedness_check(const OrthoBasis<double>& basis,
                                         const std::function<double(double)>& f, int n, double p) {
  FourierState<double> st = fourier_coeffs<double>(basis, f, n);
  Poly<double> V(vp_filtered_coeffs(st, n));
  const double X = basis.xmax();
  const WeightSpec spec = basis.spec();
  const WeightSpec spec14 = spec.shift_t_exponent(0.25);

  auto vnw = [&](double x) { return eval_poly(basis, V, x) * basis.weight(x); };
  auto t14fw = [&](double x) { return eval_w(spec14, x) * f(x); };
  auto resw = [&](double x) { return (f(x) - eval_poly(basis, V, x)) * basis.weight(x); };

  VpBoundednessReport rep;
  if (std::isinf(p)) {
    std::vector<double> grid = cosine_grid(-X, X, 2001);
    rep.lhs1 = sup_on_grid<double>(vnw, grid);
    rep.rhs1 = sup_on_grid<double>(t14fw, grid);
    rep.lhs2 = sup_on_grid<double>(resw, grid);
  } else {
    rep.lhs1 = lp_two_sided<double>(vnw, 0.0, X, p, 48, 16);
    rep.rhs1 = lp_two_sided<double>(t14fw, 0.0, X, p, 48, 16);
    rep.lhs2 = lp_two_sided<double>(resw, 0.0, X, p, 48, 16);
  }
  OrthoBasis<double> basis14 = OrthoBasis<double>::build(spec14, basis.nmax());
  rep.rhs2 = best_approx<double>(f, basis14, n, p).error;
  rep.ratio1 = rep.rhs1 > 0 ? rep.lhs1 / rep.rhs1 : 0.0;
  rep.ratio2 = rep.rhs2 > 0 ? rep.lhs2 / rep.rhs2 : 0.0;
  return rep;
}

}  // namespace wpa
