#pragma once

// Empirical verification of the derivative-transfer inequalities: both sides
// of each display are computed on desk-scale inputs and the sup of lhs/rhs is
// reported as the empirical constant, together with a stability verdict
// (max/min of the per-k ratios across n below a threshold).
//
// Tables whose error scales sink below the double-precision floor are
// recomputed in __float128 so that genuinely tiny quantities stay resolvable
// (policy "automatic").

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpa/bestapprox.hpp"
#include "wpa/expr.hpp"
#include "wpa/norms.hpp"

namespace wpa {

enum class TransferKind {
  derivative_transfer,   // pointwise transfer, sup norm        (CLI id 2.3)
  transfer_shift_minus,  // approximant under w_{-1/4}          (CLI id 2.4 variant 2)
  transfer_shift_per_k,  // per-k approximant under w_{k/2}     (CLI id 2.5)
  lp_transfer,           // Lp version with the sharp weight    (CLI id 4.1)
};

enum class Precision { automatic, dbl, quad };

struct RatioRow {
  int n = 0, k = 0;
  double p = std::numeric_limits<double>::infinity();
  double lhs = 0, rhs = 0, rhs2 = 0, ratio = 0;
  bool degenerate = false;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double empirical_C = 0;
  bool verdict = false;
  std::map<int, double> per_k_spread;  // max/min of ratios across n, per k
  bool chain_ok = true;                // rhs <= rhs2 * (1 + 1e-6) row-wise
  std::string precision = "double";
  double stability_threshold = 10.0;
  double scale = 1.0;  // sup |f w| reference used for degeneracy floors
  // Lp companion check (lp_transfer only): ||Q' w (f - f(0))||_p vs ||w f'||_p
  double g_bound_lhs = 0, g_bound_rhs = 0, g_bound_ratio = 0;
};

struct TransferConfig {
  TransferKind kind = TransferKind::derivative_transfer;
  double p = std::numeric_limits<double>::infinity();  // lp_transfer norm
  double beta = 1.5;                                   // sharp-weight parameter
  bool collapse_freud = false;  // replace every T^mu shift by 1 (Freud license)
  Precision precision = Precision::automatic;
  int interior_points = 641;
  int tail_points = 64;
  int threads = 0;  // 0 = hardware
};

// Main harness entry. f is given symbolically so that f^(k) is trustworthy.
RatioTable verify_transfer(const ExprPtr& f, int r, const WeightSpec& spec,
                           const std::vector<int>& n_list, const TransferConfig& cfg = {});

struct IntegralRemainderReport {
  int n = 0;
  double lhs = 0, rhs = 0, ratio = 0;
  double ortho_residual = 0;  // max_j |<f' - v_n(f'), p_j>| for j <= n
};

// || w Int_0^x (f' - v_n(f')) ||_inf against (a_n/n) E_n(w_{1/4}, f').
IntegralRemainderReport verify_integral_remainder(const ExprPtr& f, const WeightSpec& spec, int n);

struct SplicedAntiderivativeReport {
  int n = 0;
  double err_F = 0, bound_F = 0;  // ||w (F - S_2n)||_inf vs (a_n/n) E_n(w_{1/4}, f')
  double err_S = 0, bound_S = 0;  // ||w S_2n'||_inf vs E_{n-1}(w_{1/4}, f')
  int deg_S = 0;
};

SplicedAntiderivativeReport verify_spliced_antiderivative(const ExprPtr& f, const WeightSpec& spec,
                                                          int n);

struct BernsteinReport {
  struct Row {
    int n = 0, k = 0;
    double emp_C = 0;
  };
  std::vector<Row> rows;
  std::map<int, double> spread_per_k;
  bool pass = false;
  double threshold = 4.0;
};

// ||P^(k) w||_inf <= C (n/a_n)^k ||T^{k/2} P w||_inf over random polynomials.
BernsteinReport bernstein_check(const WeightSpec& spec, const std::vector<int>& n_list,
                                const std::vector<int>& k_list, int count, std::uint64_t seed);

struct VpBoundednessReport {
  double lhs1 = 0, rhs1 = 0, ratio1 = 0;  // ||v_n(f) w|| vs ||T^{1/4} w f||
  double lhs2 = 0, rhs2 = 0, ratio2 = 0;  // ||(f - v_n(f)) w|| vs E_{p,n}(w_{1/4}, f)
};

VpBoundednessReport vp_boundedness_check(const OrthoBasis<double>& basis,
                                         const std::function<double(double)>& f, int n, double p);

// Evaluation grid for weighted sup norms: cosine-graded over [-a_{2n}, a_{2n}]
// plus geometric tail points out to the truncation bound.
template <class R>
std::vector<R> harness_grid(const MrsSolver<R>& solver, int n, R X, int interior = 641,
                            int tail = 64) {
  R a2n = solver.mrs_number(R(std::max(2 * n, 2)));
  if (!(a2n < X)) a2n = X * R(0.98);
  std::vector<R> g = cosine_grid(-a2n, a2n, interior | 1);
  for (int j = 1; j <= tail; ++j) {
    R x = a2n * num::pow(X / a2n, R(j) / R(tail));
    g.push_back(x);
    g.push_back(-x);
  }
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace wpa
