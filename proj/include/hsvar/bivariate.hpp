#pragma once

#include <cmath>
#include <limits>

#include "hsvar/errors.hpp"
#include "hsvar/linalg.hpp"

namespace hsvar {

// Covariance entries of one bivariate regime: variances of (p, q) and their
// covariance.
struct BivariateCovariances {
  double op2 = 1, oq2 = 1, opq = 0;

  void validate() const {
    if (!(op2 > 0.0) || !(oq2 > 0.0) || !(op2 * oq2 - opq * opq > 0.0))
      throw ValidationError("bivariate: covariance matrix not positive definite");
  }
  Matrix matrix() const {
    Matrix m(2, 2);
    m << op2, opq, opq, oq2;
    return m;
  }
};

// Interval endpoint with explicit open/closed and infinite tags; serialized
// output never uses sentinel floats for unbounded ends.
struct Endpoint {
  double value = 0;
  bool open = false;
  bool infinite = false;

  static Endpoint closed(double v) { return {v, false, false}; }
  static Endpoint open_at(double v) { return {v, true, false}; }
  static Endpoint minus_inf() { return {-std::numeric_limits<double>::infinity(), true, true}; }
  static Endpoint plus_inf() { return {std::numeric_limits<double>::infinity(), true, true}; }
};

struct Interval {
  Endpoint lo, hi;
};

struct BivariateSet {
  Interval alpha, beta;
  int case_tag = 1;  // 1: opq >= 0, 2: opq < 0
};

// Closed-form identified sets for the simultaneous coefficients (alpha,
// beta) of the bivariate model under sign normalization alone or together
// with the demand/supply sign restrictions alpha >= 0, beta <= 0.
inline BivariateSet bivariate_identified_set(const BivariateCovariances& o, bool with_signs) {
  o.validate();
  BivariateSet out;
  if (o.opq >= 0.0) {
    out.case_tag = 1;
    const Endpoint alpha_hi =
        o.opq > 0.0 ? Endpoint::closed(o.oq2 / o.opq) : Endpoint::plus_inf();
    if (!with_signs) {
      out.alpha = {Endpoint::minus_inf(), alpha_hi};
      out.beta = {Endpoint::minus_inf(), Endpoint::plus_inf()};
    } else {
      out.alpha = {Endpoint::closed(o.opq / o.op2), alpha_hi};
      out.beta = {Endpoint::minus_inf(), Endpoint::closed(0.0)};
    }
  } else {
    out.case_tag = 2;
    if (!with_signs) {
      out.alpha = {Endpoint::minus_inf(), Endpoint::plus_inf()};
      out.beta = {Endpoint::minus_inf(), Endpoint::plus_inf()};
    } else {
      out.alpha = {Endpoint::closed(0.0), Endpoint::plus_inf()};
      out.beta = {Endpoint::closed(o.op2 / o.opq), Endpoint::closed(o.opq / o.oq2)};
    }
  }
  return out;
}

enum class BivariatePointRestriction { beta_zero, alpha_zero };

// Point identification with one exclusion restriction: the remaining
// coefficient equals an OLS-style moment ratio.
inline double bivariate_ols_point(const BivariateCovariances& o,
                                  BivariatePointRestriction restriction) {
  o.validate();
  if (restriction == BivariatePointRestriction::beta_zero) {
    if (o.opq < 0.0) throw CaseMismatch("bivariate_ols_point: beta=0 requires opq >= 0");
    return o.opq / o.op2;
  }
  if (o.opq >= 0.0) throw CaseMismatch("bivariate_ols_point: alpha=0 requires opq < 0");
  return o.opq / o.oq2;
}

struct BivariateEigen {
  double lambda1 = 0, lambda2 = 0;
  double delta = 0;  // square root of the eigenvalue-equation discriminant numerator
};

// Closed-form eigenvalues of Omega1tr^{-1} Omega2 Omega1tr^{-1}' for the
// bivariate problem; delta = 0 exactly when the two regimes carry no
// identifying information beyond a common scale.
inline BivariateEigen bivariate_eigen(const BivariateCovariances& o1,
                                      const BivariateCovariances& o2) {
  o1.validate();
  o2.validate();
  const double det1 = o1.op2 * o1.oq2 - o1.opq * o1.opq;
  const double num = o1.op2 * o2.oq2 + o2.op2 * o1.oq2 - 2.0 * o1.opq * o2.opq;
  const double d1 = o1.op2 * o2.oq2 - o2.op2 * o1.oq2;
  const double d2 = o1.op2 * o2.opq - o2.op2 * o1.opq;
  const double d3 = o1.oq2 * o2.opq - o2.oq2 * o1.opq;
  double disc = d1 * d1 + 4.0 * d2 * d3;
  if (disc < 0.0 && disc > -1e-12 * (1.0 + d1 * d1)) disc = 0.0;
  BivariateEigen out;
  out.delta = std::sqrt(std::max(disc, 0.0));
  out.lambda1 = (num + out.delta) / (2.0 * det1);
  out.lambda2 = (num - out.delta) / (2.0 * det1);
  return out;
}

}  // namespace hsvar
