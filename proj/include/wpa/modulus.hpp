#pragma once

// Weighted modulus of smoothness
//   omega_p(f, w, t) = sup_{0<h<=t} || w Delta_{h Phi_t} f ||_{Lp(|x| <= sigma(2t))}
//                      + inf_c || w (f - c) ||_{Lp(|x| >= sigma(4t))},
// plus the bounded-variation functional and the Jackson-type ratio tables.

#include <functional>
#include <vector>

#include "wpa/mrs.hpp"
#include "wpa/orthopoly.hpp"
#include "wpa/smoothfn.hpp"

namespace wpa {

struct ModulusReport {
  double main_term = 0;
  double tail_term = 0;
  double omega = 0;
  double t = 0;
  double p = 0;
  double sigma_2t = 0, sigma_4t = 0;
  double best_c = 0;  // minimizer of the tail infimum
};

ModulusReport omega_report(const std::function<double(double)>& f, const MrsSolver<double>& solver,
                           double p, double t, int h_samples = 32);

// Int w |f'| over the truncation window; NormDiverges when the integrand has
// not decayed at the boundary.
double bv_integral(const std::function<double(double)>& f_prime, const WeightSpec& spec);

struct JacksonRow {
  int n = 0;
  double a_n = 0, E = 0, omega = 0, bound = 0, ratio1 = 0, ratio2 = 0;
};
struct JacksonTable {
  std::vector<JacksonRow> rows;
  int k = 1;
  double p = 0;
};

// Per n: E_{p,n}(w, f), omega_p(f, w, a_n/n), (a_n/n)^k ||f^(k) w||_p and the
// two ratios E/omega and E/bound.
JacksonTable jackson_check(const SmoothFn<double>& f, const OrthoBasis<double>& basis,
                           const MrsSolver<double>& solver, double p,
                           const std::vector<int>& n_list, int k = 1);

struct OmegaDecayReport {
  std::vector<double> t_list;
  std::vector<double> omega_values;
  bool pass = false;
};

// omega_inf along a decreasing t grid; passes when the last value has dropped
// below a tenth of the first. Requires sqrt(T) w f to vanish at the boundary.
OmegaDecayReport omega_vanishes_check(const std::function<double(double)>& f,
                                      const MrsSolver<double>& solver,
                                      const std::vector<double>& t_list);

// Abscissa where Q reaches the given level (integration cutoff helper).
double x_at_Q(const WeightSpec& spec, double q_target);

}  // namespace wpa
