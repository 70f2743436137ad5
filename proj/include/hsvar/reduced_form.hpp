#pragma once

#include <cmath>
#include <vector>

#include "hsvar/dataset.hpp"
#include "hsvar/errors.hpp"
#include "hsvar/linalg.hpp"

namespace hsvar {

// Reduced-form parameters phi = (B, Omega1, Omega2). B is n x m with the
// intercept in the first column followed by the lag coefficient blocks.
struct ReducedForm {
  Matrix B;
  Matrix omega1;
  Matrix omega2;
  bool stable = true;

  Eigen::Index n_vars() const { return B.rows(); }
  int lag_order() const {
    return static_cast<int>((B.cols() - 1) / B.rows());
  }
  Matrix lag_block(int i) const {  // B_i, 1-based
    const Eigen::Index n = n_vars();
    return B.middleCols(1 + (i - 1) * n, n);
  }
  Matrix lag_sum() const {
    const Eigen::Index n = n_vars();
    Matrix s = Matrix::Zero(n, n);
    for (int i = 1; i <= lag_order(); ++i) s += lag_block(i);
    return s;
  }
};

inline Matrix companion_matrix(const ReducedForm& rf) {
  const Eigen::Index n = rf.n_vars();
  const int l = rf.lag_order();
  Matrix f = Matrix::Zero(n * l, n * l);
  for (int i = 1; i <= l; ++i) f.block(0, (i - 1) * n, n, n) = rf.lag_block(i);
  if (l > 1) f.block(n, 0, n * (l - 1), n * (l - 1)).setIdentity();
  return f;
}

inline bool is_stable(const ReducedForm& rf, double margin = 0.0) {
  return spectral_radius(companion_matrix(rf)) < 1.0 - margin;
}

namespace detail {

struct Split {
  Matrix y1, y2, x1, x2;
};

inline Split split_regimes(const Matrix& y, const Matrix& x, int t_break) {
  Split s;
  s.y1 = y.leftCols(t_break);
  s.y2 = y.rightCols(y.cols() - t_break);
  s.x1 = x.leftCols(t_break);
  s.x2 = x.rightCols(x.cols() - t_break);
  return s;
}

inline Matrix residual_cov(const Matrix& u, double divisor, const char* who) {
  if (!(divisor > 0.0)) throw InvalidRegime(std::string(who) + ": too few observations in regime");
  Matrix omega = (u * u.transpose()) / divisor;
  return 0.5 * (omega + omega.transpose());
}

}  // namespace detail

// Equationwise OLS followed by per-regime residual covariances with the
// (T_i - n m) degrees-of-freedom divisor.
inline ReducedForm ols_estimate(const Dataset& data) {
  data.validate();
  const Matrix y = data.observations;
  const Matrix x = regressor_matrix(data);
  const int m = data.n_regressors();
  const Eigen::Index n = data.n_vars();
  const Matrix xxt = x * x.transpose();
  Eigen::FullPivLU<Matrix> lu(xxt);
  lu.setThreshold(1e-10);
  if (lu.rank() < m) throw SingularRegressors("ols_estimate: X X' rank deficient");
  const Matrix b = (lu.solve(x * y.transpose())).transpose();
  const Matrix u = y - b * x;
  auto s = detail::split_regimes(u, x, data.break_index);
  const double nm = static_cast<double>(n) * m;
  ReducedForm rf;
  rf.B = b;
  rf.omega1 = detail::residual_cov(s.y1, data.break_index - nm, "ols_estimate");
  rf.omega2 = detail::residual_cov(s.y2, (data.n_obs() - data.break_index) - nm, "ols_estimate");
  rf.stable = is_stable(rf);
  return rf;
}

namespace detail {

// kron(a, b) for small dense matrices.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

inline Matrix spd_inverse(const Matrix& a, const char* who) {
  Eigen::LLT<Matrix> llt(0.5 * (a + a.transpose()));
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(std::string(who) + ": covariance not positive definite");
  Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
  return 0.5 * (inv + inv.transpose());
}

// One weighted least squares pass for vec(B) given the two regime weights.
inline Matrix weighted_coefficients(const Matrix& y, const Matrix& x, int t_break,
                                    const Matrix& omega1, const Matrix& omega2) {
  const Eigen::Index n = y.rows();
  const Eigen::Index m = x.rows();
  auto s = split_regimes(y, x, t_break);
  const Matrix w1 = spd_inverse(omega1, "gls step");
  const Matrix w2 = spd_inverse(omega2, "gls step");
  const Matrix p = kron(s.x1 * s.x1.transpose(), w1) + kron(s.x2 * s.x2.transpose(), w2);
  Vector rhs(n * m);
  const Matrix r1 = w1 * s.y1 * s.x1.transpose();
  const Matrix r2 = w2 * s.y2 * s.x2.transpose();
  for (Eigen::Index j = 0; j < m; ++j)
    rhs.segment(j * n, n) = r1.col(j) + r2.col(j);
  Eigen::LDLT<Matrix> ldlt(p);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SingularWeighting("gls step: weighting matrix singular");
  const Vector phi = ldlt.solve(rhs);
  Matrix b(n, m);
  for (Eigen::Index j = 0; j < m; ++j) b.col(j) = phi.segment(j * n, n);
  return b;
}

}  // namespace detail

// Feasible GLS: OLS covariances in the first step, then the weighted
// least-squares coefficient formula, then covariances from GLS residuals.
inline ReducedForm gls_estimate(const Dataset& data) {
  const ReducedForm ols = ols_estimate(data);
  const Matrix y = data.observations;
  const Matrix x = regressor_matrix(data);
  const Matrix b = detail::weighted_coefficients(y, x, data.break_index, ols.omega1, ols.omega2);
  const Matrix u = y - b * x;
  auto s = detail::split_regimes(u, x, data.break_index);
  const double nm = static_cast<double>(data.n_vars()) * data.n_regressors();
  ReducedForm rf;
  rf.B = b;
  rf.omega1 = detail::residual_cov(s.y1, data.break_index - nm, "gls_estimate");
  rf.omega2 = detail::residual_cov(s.y2, (data.n_obs() - data.break_index) - nm, "gls_estimate");
  rf.stable = is_stable(rf);
  return rf;
}

// Exact Gaussian log-likelihood (normalizing constants included),
// conditional on the presample, with per-regime error covariances.
inline double log_likelihood_yx(const Matrix& y, const Matrix& x, int t_break,
                                const ReducedForm& rf) {
  const Eigen::Index n = y.rows();
  const Eigen::Index t_total = y.cols();
  const Matrix u = y - rf.B * x;
  const Matrix l1 = cholesky_lower(rf.omega1);
  const Matrix l2 = cholesky_lower(rf.omega2);
  const double logdet1 = 2.0 * l1.diagonal().array().log().sum();
  const double logdet2 = 2.0 * l2.diagonal().array().log().sum();
  double quad = 0.0;
  const auto solve1 = l1.triangularView<Eigen::Lower>();
  const auto solve2 = l2.triangularView<Eigen::Lower>();
  for (Eigen::Index t = 0; t < t_total; ++t) {
    const Vector z = (t < t_break) ? Vector(solve1.solve(u.col(t)))
                                   : Vector(solve2.solve(u.col(t)));
    quad += z.squaredNorm();
  }
  const double t1 = static_cast<double>(t_break);
  const double t2 = static_cast<double>(t_total - t_break);
  return -0.5 * static_cast<double>(n) * static_cast<double>(t_total) * std::log(2.0 * M_PI) -
         0.5 * t1 * logdet1 - 0.5 * t2 * logdet2 - 0.5 * quad;
}

inline double log_likelihood(const Dataset& data, const ReducedForm& rf) {
  data.validate();
  return log_likelihood_yx(data.observations, regressor_matrix(data), data.break_index, rf);
}

// Gaussian ML by coordinate ascent: the weighted least-squares step for B
// given the covariances, then per-regime residual covariances (divisor T_i)
// given B. Each half-step maximizes the likelihood in its block, so the
// objective is non-decreasing.
inline ReducedForm ml_estimate(const Dataset& data, const ReducedForm& init,
                               double tol = 1e-8, int max_iter = 500) {
  data.validate();
  const Matrix y = data.observations;
  const Matrix x = regressor_matrix(data);
  const int t_break = data.break_index;
  const double t1 = t_break;
  const double t2 = static_cast<double>(data.n_obs() - t_break);
  ReducedForm cur = init;
  double ll = log_likelihood_yx(y, x, t_break, cur);
  std::vector<double> trace;
  for (int it = 0; it < max_iter; ++it) {
    ReducedForm next = cur;
    next.B = detail::weighted_coefficients(y, x, t_break, cur.omega1, cur.omega2);
    const Matrix u = y - next.B * x;
    auto s = detail::split_regimes(u, x, t_break);
    next.omega1 = detail::residual_cov(s.y1, t1, "ml_estimate");
    next.omega2 = detail::residual_cov(s.y2, t2, "ml_estimate");
    const double ll_next = log_likelihood_yx(y, x, t_break, next);
    const double improvement = ll_next - ll;
    trace.push_back(improvement);
    cur = next;
    ll = ll_next;
    if (improvement < tol) {
      cur.stable = is_stable(cur);
      return cur;
    }
  }
  std::vector<double> iterate;
  for (Eigen::Index j = 0; j < cur.B.cols(); ++j)
    for (Eigen::Index i = 0; i < cur.B.rows(); ++i) iterate.push_back(cur.B(i, j));
  for (Eigen::Index j = 0; j < cur.omega1.cols(); ++j)
    for (Eigen::Index i = 0; i < cur.omega1.rows(); ++i) iterate.push_back(cur.omega1(i, j));
  for (Eigen::Index j = 0; j < cur.omega2.cols(); ++j)
    for (Eigen::Index i = 0; i < cur.omega2.rows(); ++i) iterate.push_back(cur.omega2(i, j));
  throw NoConvergence("ml_estimate: no convergence after " + std::to_string(max_iter) +
                          " iterations",
                      trace, iterate);
}

inline ReducedForm ml_estimate(const Dataset& data) {
  return ml_estimate(data, gls_estimate(data));
}

// Moving-average coefficients of the VAR, C_0 = I and
// C_j = sum_{i=1..min(j,l)} B_i C_{j-i}.
struct VmaCoefficients {
  int horizons = 0;
  std::vector<Matrix> C;  // C_0 ... C_horizons
};

inline VmaCoefficients vma_coefficients(const ReducedForm& rf, int horizons) {
  if (horizons < 0) throw ValidationError("vma_coefficients: horizons must be >= 0");
  const Eigen::Index n = rf.n_vars();
  const int l = rf.lag_order();
  VmaCoefficients out;
  out.horizons = horizons;
  out.C.reserve(horizons + 1);
  out.C.push_back(Matrix::Identity(n, n));
  for (int j = 1; j <= horizons; ++j) {
    Matrix cj = Matrix::Zero(n, n);
    for (int i = 1; i <= std::min(j, l); ++i) cj += rf.lag_block(i) * out.C[j - i];
    out.C.push_back(cj);
  }
  return out;
}

// Unit-shock responses IR^h = C_h A0^{-1} for h = 0..horizons; the same in
// both regimes since only the shock variances break.
inline std::vector<Matrix> impulse_responses(const ReducedForm& rf, const Matrix& c_struct,
                                             int horizons) {
  const VmaCoefficients vma = vma_coefficients(rf, horizons);
  std::vector<Matrix> irs;
  irs.reserve(horizons + 1);
  for (int h = 0; h <= horizons; ++h) irs.push_back(vma.C[h] * c_struct);
  return irs;
}

struct LongRunResponses {
  Matrix ir_inf;   // (I - sum B_j) A0^{-1}
  Matrix cir_inf;  // (I - sum B_j)^{-1} A0^{-1}
};

// The cumulative long-run matrix needs the inverse of (I - sum B_j); the
// non-cumulative limit is also reported in the literal product form used
// in parts of the literature. Both require a stable VAR.
inline LongRunResponses long_run_responses(const ReducedForm& rf, const Matrix& c_struct) {
  if (!is_stable(rf)) throw UnstableVar("long_run_responses: companion root on/inside unit circle");
  const Matrix a = Matrix::Identity(rf.n_vars(), rf.n_vars()) - rf.lag_sum();
  LongRunResponses out;
  out.ir_inf = a * c_struct;
  out.cir_inf = a.partialPivLu().solve(c_struct);
  return out;
}

}  // namespace hsvar
