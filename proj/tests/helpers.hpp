#pragma once

#include <hsvar/hsvar.hpp>

namespace hsvar::testing {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

inline Matrix random_spd(Eigen::Index n, RngStream& rng, double ridge = 0.5) {
  const Matrix a = random_matrix(n, n, rng);
  return a * a.transpose() + ridge * Matrix::Identity(n, n);
}

inline Matrix random_orthogonal(Eigen::Index n, RngStream& rng) {
  const Matrix a = random_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  // fix a deterministic orientation
  for (Eigen::Index j = 0; j < n; ++j)
    if (q(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

// Reduced form built from a known impact matrix and variance shifts.
inline ReducedForm rf_from_truth(const Matrix& impact, const Vector& lambda, const Matrix& b) {
  ReducedForm rf;
  rf.B = b;
  rf.omega1 = impact * impact.transpose();
  rf.omega2 = impact * lambda.asDiagonal() * impact.transpose();
  rf.stable = is_stable(rf);
  return rf;
}

// Simple stable coefficient matrix: intercept zero, one lag with the given
// diagonal persistence.
inline Matrix diag_lag_coefficients(int n, double rho) {
  Matrix b = Matrix::Zero(n, n + 1);
  b.middleCols(1, n) = rho * Matrix::Identity(n, n);
  return b;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Column comparison up to sign.
inline double column_diff_up_to_sign(const Vector& a, const Vector& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace hsvar::testing
