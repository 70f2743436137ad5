#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsvar/dataset.hpp"
#include "hsvar/errors.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/rng.hpp"

namespace hsvar {

// Data-generating truth: impact matrix C = A0^{-1}, second-regime shock
// variances, and the reduced-form coefficient matrix (intercept first).
struct SimulationTruth {
  Matrix impact;  // n x n
  Vector lambda;  // n
  Matrix B;       // n x (n*l + 1)
};

// Generate a two-regime sample: structural shocks have identity covariance
// through T_B and diag(lambda) afterwards. A burn-in stretch under the
// first regime is discarded so the presample is effectively stationary.
inline Dataset simulate(const SimulationTruth& truth, int t_total, int t_break,
                        std::uint64_t seed, int burn = 200,
                        std::vector<std::string> names = {}) {
  const Eigen::Index n = truth.impact.rows();
  ReducedForm rf;
  rf.B = truth.B;
  rf.omega1 = truth.impact * truth.impact.transpose();
  rf.omega2 = truth.impact * truth.lambda.asDiagonal() * truth.impact.transpose();
  if (!is_stable(rf)) throw UnstableVar("simulate: companion matrix not stable");
  if (!(t_break > 1 && t_break < t_total)) throw BreakOutOfRange("simulate: need 1 < T_B < T");
  const int l = rf.lag_order();
  RngStream rng(seed);
  const Vector sd2 = truth.lambda.cwiseSqrt();
  const int total = burn + l + t_total;
  Matrix y(n, total);
  std::vector<Vector> lags(static_cast<size_t>(l), Vector::Zero(n));
  for (int t = 0; t < total; ++t) {
    Vector eps(n);
    for (Eigen::Index i = 0; i < n; ++i) eps(i) = rng.gaussian();
    const bool second_regime = (t - burn - l) >= t_break;  // 0-based sample period
    if (second_regime) eps = eps.cwiseProduct(sd2);
    Vector yt = rf.B.col(0) + truth.impact * eps;
    for (int i = 1; i <= l; ++i) yt += rf.lag_block(i) * lags[static_cast<size_t>(i - 1)];
    for (int i = l - 1; i >= 1; --i) lags[static_cast<size_t>(i)] = lags[static_cast<size_t>(i - 1)];
    if (l > 0) lags[0] = yt;
    y.col(t) = yt;
  }
  Dataset data;
  data.lag_order = l;
  data.break_index = t_break;
  data.presample = y.middleCols(burn, l);
  data.observations = y.rightCols(t_total);
  if (names.empty())
    for (Eigen::Index i = 0; i < n; ++i) names.push_back("y" + std::to_string(i + 1));
  data.variable_names = std::move(names);
  data.validate();
  return data;
}

}  // namespace hsvar
