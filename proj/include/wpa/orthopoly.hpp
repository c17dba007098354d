#pragma once

// Orthonormal polynomials p_k for the measure w^2 dx on a truncated domain,
// built by the discretized Stieltjes procedure, plus Fourier-type partial
// sums and de la Vallee Poussin means.
//
// Every weight shipped here is even, so the recurrence has alpha_k = 0 and
//   sqrt(beta_{k+1}) p_{k+1}(x) = x p_k(x) - sqrt(beta_k) p_{k-1}(x),
// with beta_rec[0] holding the zeroth moment (p_0 = beta_rec[0]^{-1/2}).

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "wpa/linalg.hpp"
#include "wpa/mrs.hpp"
#include "wpa/quadrature.hpp"
#include "wpa/weights.hpp"

namespace wpa {

inline constexpr int kMaxBasisDegree = 60;  // stability cap in double precision

template <class R>
class OrthoBasis {
 public:
  // Discretized Stieltjes build. The truncation bound is a_{4 nmax} * 1.05;
  // the quadrature mesh doubles until the zeroth moment is stable to 1e-12.
  static OrthoBasis build(const WeightSpec& spec, int nmax, int quad_panels = 40,
                          int nodes_per_panel = 32);

  int nmax() const { return nmax_; }
  R xmax() const { return quad_.xmax; }
  const WeightSpec& spec() const { return spec_; }
  const QuadRule<R>& quad() const { return quad_; }
  const std::vector<R>& alpha_rec() const { return alpha_rec_; }
  const std::vector<R>& beta_rec() const { return beta_rec_; }
  const std::shared_ptr<MrsSolver<R>>& solver() const { return solver_; }

  R weight(R x) const { return eval_w(spec_, x); }

  // Measure weights W_i = quad weight * w(x_i)^2.
  const std::vector<R>& measure() const { return meas_; }
  // Nodal value of p_k at quadrature node i.
  R node_p(int k, size_t i) const { return nodal_[k][i]; }

  void eval_all(R x, std::span<R> out) const {
    const int kmax = int(out.size()) - 1;
    R pm1 = 0, pk = p0_;
    for (int k = 0; k <= kmax; ++k) {
      out[k] = pk;
      if (k == kmax) break;
      R pn = (x * pk - sqrt_beta_[k] * pm1) / sqrt_beta_[k + 1];
      pm1 = pk;
      pk = pn;
    }
  }

  R eval_p(int k, R x) const {
    if (k < 0 || k > nmax_)
      throw Error("orthopoly", errc::degree_out_of_range,
                  "p_k index " + std::to_string(k) + " exceeds nmax " + std::to_string(nmax_));
    std::vector<R> buf(k + 1);
    eval_all(x, buf);
    return buf[k];
  }

  // Values and derivatives up to `order` for all k <= kmax; out[d][k].
  void eval_all_derivs(R x, int order, int kmax, std::vector<std::vector<R>>& out) const {
    out.assign(order + 1, std::vector<R>(kmax + 1, R(0)));
    std::vector<R> pm1(order + 1, R(0)), pk(order + 1, R(0)), pn(order + 1, R(0));
    pk[0] = p0_;
    for (int k = 0; k <= kmax; ++k) {
      for (int d = 0; d <= order; ++d) out[d][k] = pk[d];
      if (k == kmax) break;
      for (int d = 0; d <= order; ++d) {
        R t = x * pk[d] - sqrt_beta_[k] * pm1[d];
        if (d > 0) t += R(d) * pk[d - 1];
        pn[d] = t / sqrt_beta_[k + 1];
      }
      pm1 = pk;
      pk = pn;
    }
  }

  // Derivative matrix: column j holds the coefficients of p_j'.
  const Matrix<R>& dmat() const {
    std::lock_guard<std::mutex> lk(*mu_);
    if (dmat_.rows == 0) build_dmat();
    return dmat_;
  }

  // Antiderivative matrix: column j holds the coefficients of
  // x -> Int_0^x p_j; columns j <= nmax-1 only (degree j+1 must fit).
  const Matrix<R>& imat() const {
    std::lock_guard<std::mutex> lk(*mu_);
    if (imat_.rows == 0) build_imat();
    return imat_;
  }

  // Max |<p_j, p_k> - delta_jk| over j, k <= kmax under the basis quadrature.
  R gram_residual(int kmax) const;

 private:
  void build_dmat() const;
  void build_imat() const;

  WeightSpec spec_;
  int nmax_ = 0;
  QuadRule<R> quad_;
  std::vector<R> alpha_rec_, beta_rec_, sqrt_beta_;
  R p0_ = 0;
  std::vector<R> meas_;
  std::vector<std::vector<R>> nodal_;  // nodal_[k][i] = p_k(x_i)
  std::shared_ptr<MrsSolver<R>> solver_;
  mutable Matrix<R> dmat_, imat_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

template <class R>
OrthoBasis<R> OrthoBasis<R>::build(const WeightSpec& spec, int nmax, int quad_panels,
                                   int nodes_per_panel) {
  if (nmax < 1) throw Error("orthopoly", errc::bad_config, "nmax must be >= 1");
  if (nmax > kMaxBasisDegree)
    throw Error("orthopoly", errc::loss_of_orthogonality,
                "nmax " + std::to_string(nmax) + " beyond the stable range (cap " +
                    std::to_string(kMaxBasisDegree) + ")");
  spec.validate();

  OrthoBasis b;
  b.spec_ = spec;
  b.nmax_ = nmax;
  b.solver_ = std::make_shared<MrsSolver<R>>(spec.base());
  const R X = b.solver_->mrs_number(R(4 * nmax)) * R(1.05);

  // Double the panel count until the zeroth moment stabilizes.
  auto moment0 = [&](int panels) {
    QuadRule<R> q = make_symmetric_rule(X, panels, nodes_per_panel);
    R mu0 = 0;
    for (size_t i = 0; i < q.size(); ++i) {
      R w = eval_w(spec, q.nodes[i]);
      mu0 += q.weights[i] * w * w;
    }
    return std::make_pair(q, mu0);
  };
  int panels = quad_panels;
  auto [q_prev, mu_prev] = moment0(panels);
  for (;;) {
    if (panels >= 1280)
      throw Error("orthopoly", errc::loss_of_orthogonality, "quadrature failed to stabilize");
    auto [q_next, mu_next] = moment0(2 * panels);
    if (num::fabs(mu_next - mu_prev) <= R(1e-12) * num::fabs(mu_next)) {
      b.quad_ = std::move(q_next);
      break;
    }
    panels *= 2;
    q_prev = std::move(q_next);
    mu_prev = mu_next;
  }

  const size_t M = b.quad_.size();
  b.meas_.resize(M);
  R mu0 = 0;
  for (size_t i = 0; i < M; ++i) {
    R w = eval_w(spec, b.quad_.nodes[i]);
    b.meas_[i] = b.quad_.weights[i] * w * w;
    mu0 += b.meas_[i];
  }

  b.alpha_rec_.assign(nmax + 1, R(0));  // even weight
  b.beta_rec_.assign(nmax + 1, R(0));
  b.sqrt_beta_.assign(nmax + 2, R(0));
  b.beta_rec_[0] = mu0;
  b.p0_ = 1 / num::sqrt(mu0);
  b.sqrt_beta_[0] = 0;

  b.nodal_.assign(nmax + 1, std::vector<R>(M));
  std::vector<R> pm1(M, R(0)), pk(M, b.p0_), t(M);
  b.nodal_[0] = pk;
  for (int k = 0; k < nmax; ++k) {
    R beta = 0;
    for (size_t i = 0; i < M; ++i) {
      t[i] = b.quad_.nodes[i] * pk[i] - b.sqrt_beta_[k] * pm1[i];
      beta += b.meas_[i] * t[i] * t[i];
    }
    if (!(beta > R(0)) || !num::isfinite(beta))
      throw Error("orthopoly", errc::loss_of_orthogonality,
                  "nonpositive recurrence coefficient at degree " + std::to_string(k + 1));
    b.beta_rec_[k + 1] = beta;
    b.sqrt_beta_[k + 1] = num::sqrt(beta);
    for (size_t i = 0; i < M; ++i) {
      R v = t[i] / b.sqrt_beta_[k + 1];
      pm1[i] = pk[i];
      pk[i] = v;
      b.nodal_[k + 1][i] = v;
    }
  }
  b.sqrt_beta_[nmax + 1] = b.sqrt_beta_[nmax];  // unused guard

  R gram = b.gram_residual(nmax);
  if (!(gram <= R(1e-6)))
    throw Error("orthopoly", errc::loss_of_orthogonality,
                "Gram residual " + std::to_string(num::to_double(gram)) +
                    " signals insufficient quadrature");
  return b;
}

template <class R>
R OrthoBasis<R>::gram_residual(int kmax) const {
  R worst = 0;
  const size_t M = quad_.size();
  for (int j = 0; j <= kmax; ++j)
    for (int k = j; k <= kmax; ++k) {
      R s = 0;
      for (size_t i = 0; i < M; ++i) s += meas_[i] * nodal_[j][i] * nodal_[k][i];
      R d = num::fabs(s - (j == k ? R(1) : R(0)));
      if (d > worst) worst = d;
    }
  return worst;
}

template <class R>
void OrthoBasis<R>::build_dmat() const {
  const size_t M = quad_.size();
  const int n = nmax_;
  std::vector<std::vector<R>> der;
  Matrix<R> D(n + 1, n + 1);
  std::vector<std::vector<R>> dp(n + 1, std::vector<R>(M));
  for (size_t i = 0; i < M; ++i) {
    eval_all_derivs(quad_.nodes[i], 1, n, der);
    for (int k = 0; k <= n; ++k) dp[k][i] = der[1][k];
  }
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < j; ++i) {
      if (((i + j) & 1) == 0) continue;  // parity-forbidden for even weights
      R s = 0;
      for (size_t q = 0; q < M; ++q) s += meas_[q] * dp[j][q] * nodal_[i][q];
      D(i, j) = s;
    }
  dmat_ = std::move(D);
}

template <class R>
void OrthoBasis<R>::build_imat() const {
  const size_t M = quad_.size();
  const int n = nmax_;
  // Cumulative antiderivatives J_k(x_i) = Int_0^{x_i} p_k, anchored at 0 and
  // integrated gap-by-gap with a rule exact to degree 63.
  const GaussLegendre<R> gl = gauss_legendre<R>(32);
  std::vector<std::vector<R>> J(n + 1, std::vector<R>(M, R(0)));
  std::vector<R> acc(n + 1), buf(n + 1);
  auto gap = [&](R a, R bnd, std::vector<R>& out) {
    std::fill(out.begin(), out.end(), R(0));
    const R mid = (a + bnd) / 2, half = (bnd - a) / 2;
    for (size_t g = 0; g < gl.nodes.size(); ++g) {
      eval_all(mid + half * gl.nodes[g], buf);
      const R w = half * gl.weights[g];
      for (int k = 0; k <= n; ++k) out[k] += w * buf[k];
    }
  };
  std::vector<R> seg(n + 1);
  // right half
  size_t first_pos = 0;
  while (first_pos < M && quad_.nodes[first_pos] < R(0)) ++first_pos;
  std::fill(acc.begin(), acc.end(), R(0));
  R prev = 0;
  for (size_t i = first_pos; i < M; ++i) {
    gap(prev, quad_.nodes[i], seg);
    for (int k = 0; k <= n; ++k) acc[k] += seg[k];
    for (int k = 0; k <= n; ++k) J[k][i] = acc[k];
    prev = quad_.nodes[i];
  }
  // left half
  std::fill(acc.begin(), acc.end(), R(0));
  prev = 0;
  for (size_t ii = first_pos; ii-- > 0;) {
    gap(prev, quad_.nodes[ii], seg);  // oriented integral, negative direction
    for (int k = 0; k <= n; ++k) acc[k] += seg[k];
    for (int k = 0; k <= n; ++k) J[k][ii] = acc[k];
    prev = quad_.nodes[ii];
  }
  Matrix<R> A(n + 1, n);  // columns k <= nmax-1
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= std::min(n, k + 1); ++j) {
      if (((j + k) & 1) == 0) continue;  // antiderivative flips parity
      R s = 0;
      for (size_t q = 0; q < M; ++q) s += meas_[q] * J[k][q] * nodal_[j][q];
      A(j, k) = s;
    }
  imat_ = std::move(A);
}

// ---- Fourier-type machinery ----

template <class R>
struct FourierState {
  std::vector<R> coeffs;  // a_k(w^2, f), k = 0..2n
  int n = 0;
};

// Raw expansion coefficients a_k = Int f p_k w^2 for k = 0..kmax.
template <class R, class F>
std::vector<R> expansion_coeffs(const OrthoBasis<R>& basis, F&& f, int kmax) {
  if (kmax > basis.nmax())
    throw Error("orthopoly", errc::degree_out_of_range, "coefficient index exceeds nmax");
  const auto& q = basis.quad();
  std::vector<R> a(kmax + 1, R(0));
  for (size_t i = 0; i < q.size(); ++i) {
    const R fw = basis.measure()[i] * f(q.nodes[i]);
    for (int k = 0; k <= kmax; ++k) a[k] += fw * basis.node_p(k, i);
    if (!num::isfinite(fw))
      throw Error("orthopoly", errc::norm_diverges, "integrand not finite on the quadrature grid");
  }
  return a;
}

template <class R, class F>
FourierState<R> fourier_coeffs(const OrthoBasis<R>& basis, F&& f, int n) {
  FourierState<R> st;
  st.n = n;
  st.coeffs = expansion_coeffs(basis, f, 2 * n);
  return st;
}

// s_m(f, x) = sum_{k<m} a_k p_k(x); reproduces polynomials of degree < m.
template <class R>
R partial_sum(const FourierState<R>& state, const OrthoBasis<R>& basis, int m, R x) {
  if (m < 0 || m > int(state.coeffs.size()))
    throw Error("orthopoly", errc::degree_out_of_range, "partial sum order exceeds coefficients");
  if (m == 0) return R(0);
  std::vector<R> p(m);
  basis.eval_all(x, p);
  R s = 0;
  for (int k = 0; k < m; ++k) s += state.coeffs[k] * p[k];
  return s;
}

// v_n filter: 1 for k <= n, (2n-k)/n for n <= k <= 2n-1.
template <class R>
std::vector<R> vp_filtered_coeffs(const FourierState<R>& state, int n) {
  if (int(state.coeffs.size()) < 2 * n)
    throw Error("orthopoly", errc::degree_out_of_range, "v_n needs coefficients up to 2n-1");
  std::vector<R> c(2 * n);
  for (int k = 0; k < 2 * n; ++k) {
    R tau = k <= n ? R(1) : R(2 * n - k) / R(n);
    c[k] = tau * state.coeffs[k];
  }
  return c;
}

template <class R>
R vallee_poussin(const FourierState<R>& state, const OrthoBasis<R>& basis, int n, R x) {
  std::vector<R> c = vp_filtered_coeffs(state, n);
  std::vector<R> p(c.size());
  basis.eval_all(x, p);
  R s = 0;
  for (size_t k = 0; k < c.size(); ++k) s += c[k] * p[k];
  return s;
}

}  // namespace wpa
