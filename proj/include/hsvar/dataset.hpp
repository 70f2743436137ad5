#pragma once

#include <string>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/linalg.hpp"

namespace hsvar {

// A two-regime VAR sample. `observations` holds the estimation sample
// (n variables x T periods); `presample` holds the l initial values that
// condition the likelihood, ordered oldest to newest. `break_index` is the
// 1-based index of the last period of the low/first volatility regime
// within the estimation sample, 1 < T_B < T.
struct Dataset {
  Matrix observations;  // n x T
  Matrix presample;     // n x l
  int lag_order = 1;
  int break_index = 0;  // T_B
  std::vector<std::string> variable_names;

  Eigen::Index n_vars() const { return observations.rows(); }
  Eigen::Index n_obs() const { return observations.cols(); }
  int n_regressors() const {
    return static_cast<int>(n_vars()) * lag_order + 1;
  }

  void validate() const {
    if (lag_order < 1) throw ValidationError("dataset: lag order must be >= 1");
    if (observations.rows() < 1) throw ValidationError("dataset: no variables");
    if (presample.rows() != observations.rows() || presample.cols() != lag_order)
      throw ValidationError("dataset: presample must be n x lag_order");
    if (!(break_index > 1 && break_index < n_obs()))
      throw BreakOutOfRange("dataset: break index " + std::to_string(break_index) +
                            " outside (1, T)");
    if (!observations.allFinite() || !presample.allFinite())
      throw MissingValue("dataset: non-finite values");
  }
};

// Regressor matrix X (m x T) with x_t = (1, y_{t-1}', ..., y_{t-l}')'.
inline Matrix regressor_matrix(const Dataset& data) {
  const Eigen::Index n = data.n_vars();
  const Eigen::Index t_total = data.n_obs();
  const int l = data.lag_order;
  const int m = data.n_regressors();
  Matrix x(m, t_total);
  auto lagged = [&](Eigen::Index t, int lag) -> Vector {
    // value of y at period t - lag, with t 0-based in the estimation sample
    const Eigen::Index idx = t - lag;
    if (idx >= 0) return data.observations.col(idx);
    return data.presample.col(data.presample.cols() + idx);
  };
  for (Eigen::Index t = 0; t < t_total; ++t) {
    x(0, t) = 1.0;
    for (int lag = 1; lag <= l; ++lag)
      x.block(1 + (lag - 1) * n, t, n, 1) = lagged(t, lag);
  }
  return x;
}

}  // namespace hsvar
