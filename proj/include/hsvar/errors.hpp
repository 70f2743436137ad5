#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsvar {

// Base of all library errors. ValidationError covers malformed inputs
// (bad files, out-of-range indices, inconsistent configuration) and maps
// to CLI exit code 2; NumericalError covers failures of the numerics
// themselves (non-SPD matrices, singular systems, non-convergence) and
// maps to exit code 3.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

// linalg-core
struct NotSymmetric : NumericalError {
  using NumericalError::NumericalError;
};
struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};
struct DofTooSmall : ValidationError {
  using ValidationError::ValidationError;
};

// reduced-form
struct SingularRegressors : NumericalError {
  using NumericalError::NumericalError;
};
struct SingularWeighting : NumericalError {
  using NumericalError::NumericalError;
};
struct UnstableVar : NumericalError {
  using NumericalError::NumericalError;
};
// Carries the last iterate's parameters (flattened coefficient matrix and
// the two covariances) together with the per-iteration improvement trace.
struct NoConvergence : NumericalError {
  NoConvergence(const std::string& msg, std::vector<double> trace,
                std::vector<double> iterate = {})
      : NumericalError(msg),
        improvement_trace(std::move(trace)),
        last_iterate(std::move(iterate)) {}
  std::vector<double> improvement_trace;
  std::vector<double> last_iterate;
};

// bayes-gibbs
struct SingularPosteriorCovariance : NumericalError {
  using NumericalError::NumericalError;
};
struct InvalidRegime : ValidationError {
  using ValidationError::ValidationError;
};

// ident-engine
struct DimensionTooLarge : ValidationError {
  using ValidationError::ValidationError;
};
struct InvalidPartition : ValidationError {
  using ValidationError::ValidationError;
};
struct RedundantRestrictions : NumericalError {
  using NumericalError::NumericalError;
};

// het-test
struct RegimeTooShort : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateMoments : NumericalError {
  using NumericalError::NumericalError;
};
struct InvalidRange : ValidationError {
  using ValidationError::ValidationError;
};

// restrictions
struct HorizonExceeded : ValidationError {
  using ValidationError::ValidationError;
};
struct IndexOutOfBounds : ValidationError {
  using ValidationError::ValidationError;
};

// robust-bounds
struct ProjectionDegenerate : NumericalError {
  using NumericalError::NumericalError;
};
struct NoFeasibleStart : NumericalError {
  using NumericalError::NumericalError;
};
struct AllDrawsEmpty : NumericalError {
  using NumericalError::NumericalError;
};
struct AcceptanceTooLow : NumericalError {
  using NumericalError::NumericalError;
};

// bivariate-oracle
struct CaseMismatch : ValidationError {
  using ValidationError::ValidationError;
};

// cli-app
struct ParseError : ValidationError {
  using ValidationError::ValidationError;
};
struct BreakOutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct MissingValue : ValidationError {
  using ValidationError::ValidationError;
};
struct SyntaxError : ValidationError {
  using ValidationError::ValidationError;
};
struct DuplicateRestriction : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace hsvar
