#pragma once

// Constructive monotone approximation: given a linear differential operator
// L = sum_j a_j(x) d^j/dx^j with L(f) >= delta on R, sweep the degree until
// the best approximant under w_{-1/4} satisfies L(P_n) >= delta/2 on [-M, M].

#include <string>
#include <vector>

#include "wpa/expr.hpp"
#include "wpa/poly.hpp"
#include "wpa/smoothfn.hpp"
#include "wpa/weights.hpp"

namespace wpa {

struct OperatorTerm {
  int order = 0;
  ExprPtr coeff;  // a_j(x)
};

struct OperatorL {
  std::vector<OperatorTerm> terms;
  int k_min = 0, l_max = 0;
};

// Textual form "c0(x)*d0 + c1(x)*d1 + ...": coefficient expressions attached
// to d<order> markers; a bare "dj" means coefficient 1.
OperatorL parse_operator(const std::string& src);

double apply_L(const OperatorL& op, const SmoothFn<double>& target, double x);

template <class R>
double apply_L_poly(const OperatorL& op, const OrthoBasis<R>& basis,
                    const std::vector<Poly<R>>& derivs, double x) {
  double s = 0;
  for (const auto& term : op.terms)
    s += eval_expr(term.coeff, x) * num::to_double(eval_poly(basis, derivs[term.order], R(x)));
  return s;
}

bool check_hypothesis(const OperatorL& op, const SmoothFn<double>& f, double delta,
                      const std::vector<double>& grid);

struct MonotoneCertificate {
  bool pass = false;
  int n_star = -1;
  double min_LP = 0;  // min over the [-M, M] grid at n_star (refined)
  double delta = 0;
  double M = 0;
  std::vector<std::pair<int, double>> history;  // (n, min L(P_n))
  struct TransferRow {
    int n = 0, j = 0;
    double lhs = 0, rhs = 0;
  };
  std::vector<TransferRow> transfer_rows;       // weighted derivative bounds per (n, j)
  int n_sufficient = -1;                        // first n passing the proof-style bound
};

// Sweeps n upward computing P_{n; f, w_{-1/4}} by the weighted exchange
// algorithm; certifies the first n with min L(P_n) >= delta/2 on [-M, M].
// full_sweep keeps going to n_max so the history shows the whole trend.
MonotoneCertificate monotone_approx(const ExprPtr& f, const OperatorL& op, double delta, double M,
                                    const WeightSpec& spec, int n_max, bool full_sweep = false);

}  // namespace wpa
