#pragma once

#include <cstdint>
#include <vector>

#include "hsvar/dataset.hpp"
#include "hsvar/errors.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/rng.hpp"

namespace hsvar {

// Independent Normal / inverse-Wishart priors for vec(B), Omega1, Omega2.
struct PriorSpec {
  Vector mu_phi;
  Matrix v_phi;
  Matrix s1, s2;
  int d1 = 0, d2 = 0;
};

// Diffuse default: flat-ish Normal on the coefficients and inverse-Wishart
// scales chosen so both covariance prior means are the identity, which puts
// equal variance-shift eigenvalues at the prior mean and leaves the
// likelihood to distinguish them.
inline PriorSpec default_diffuse_prior(int n, int m) {
  PriorSpec p;
  p.mu_phi = Vector::Zero(n * m);
  p.v_phi = 1e4 * Matrix::Identity(n * m, n * m);
  p.d1 = n + 2;
  p.d2 = n + 2;
  p.s1 = static_cast<double>(p.d1 - n - 1) * Matrix::Identity(n, n);
  p.s2 = static_cast<double>(p.d2 - n - 1) * Matrix::Identity(n, n);
  return p;
}

struct GibbsConfig {
  int burn_in = 1000;
  int draws = 1000;
  int thinning = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (draws < 1 || thinning < 1 || burn_in < 0)
      throw ValidationError("gibbs config: draws >= 1, thinning >= 1, burn_in >= 0");
  }
};

struct PosteriorDraws {
  std::vector<ReducedForm> draws;
  std::vector<char> stable;  // per-draw stability flag
};

namespace detail {

// Cross-moment cache; the conditional posteriors only touch the data
// through these blocks.
struct DataMoments {
  Matrix x1x1, x2x2;  // m x m
  Matrix y1x1, y2x2;  // n x m
  Matrix y1y1, y2y2;  // n x n
  Eigen::Index n = 0, m = 0;
  int t1 = 0, t2 = 0;

  static DataMoments from(const Dataset& data) {
    data.validate();
    const Matrix y = data.observations;
    const Matrix x = regressor_matrix(data);
    auto s = split_regimes(y, x, data.break_index);
    DataMoments mom;
    mom.n = y.rows();
    mom.m = x.rows();
    mom.t1 = data.break_index;
    mom.t2 = static_cast<int>(y.cols()) - data.break_index;
    mom.x1x1 = s.x1 * s.x1.transpose();
    mom.x2x2 = s.x2 * s.x2.transpose();
    mom.y1x1 = s.y1 * s.x1.transpose();
    mom.y2x2 = s.y2 * s.x2.transpose();
    mom.y1y1 = s.y1 * s.y1.transpose();
    mom.y2y2 = s.y2 * s.y2.transpose();
    return mom;
  }

  Matrix residual_cross(const Matrix& b, int regime) const {
    const Matrix& yy = regime == 1 ? y1y1 : y2y2;
    const Matrix& yx = regime == 1 ? y1x1 : y2x2;
    const Matrix& xx = regime == 1 ? x1x1 : x2x2;
    Matrix s = yy - yx * b.transpose() - b * yx.transpose() + b * xx * b.transpose();
    return 0.5 * (s + s.transpose());
  }
};

struct PhiPosterior {
  Vector mean;
  Matrix precision_chol;  // lower L with L L' = V*^{-1}
};

inline PhiPosterior phi_conditional_posterior(const DataMoments& mom, const PriorSpec& prior,
                                              const Matrix& omega1, const Matrix& omega2) {
  const Matrix w1 = spd_inverse(omega1, "phi posterior");
  const Matrix w2 = spd_inverse(omega2, "phi posterior");
  const Matrix vinv = spd_inverse(prior.v_phi, "phi posterior prior");
  Matrix prec = kron(mom.x1x1, w1) + kron(mom.x2x2, w2) + vinv;
  prec = 0.5 * (prec + prec.transpose());
  const Matrix r1 = w1 * mom.y1x1;
  const Matrix r2 = w2 * mom.y2x2;
  Vector rhs = vinv * prior.mu_phi;
  for (Eigen::Index j = 0; j < mom.m; ++j)
    rhs.segment(j * mom.n, mom.n) += r1.col(j) + r2.col(j);
  Eigen::LLT<Matrix> llt(prec);
  if (llt.info() != Eigen::Success)
    throw SingularPosteriorCovariance("phi posterior: precision not positive definite");
  PhiPosterior out;
  out.mean = llt.solve(rhs);
  out.precision_chol = llt.matrixL();
  return out;
}

inline Vector draw_phi(const PhiPosterior& post, RngStream& rng) {
  Vector z(post.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.gaussian();
  // cov = (L L')^{-1}, so mean + L'^{-1} z has the right covariance
  return post.mean +
         post.precision_chol.transpose().triangularView<Eigen::Upper>().solve(z);
}

inline Matrix unvec_coefficients(const Vector& phi, Eigen::Index n, Eigen::Index m) {
  Matrix b(n, m);
  for (Eigen::Index j = 0; j < m; ++j) b.col(j) = phi.segment(j * n, n);
  return b;
}

}  // namespace detail

// Exact conditional posterior mean and covariance of vec(B) given the two
// covariances (useful for oracle checks; the sampler draws from the same
// distribution).
inline std::pair<Vector, Matrix> phi_posterior_moments(const Dataset& data,
                                                       const PriorSpec& prior,
                                                       const Matrix& omega1,
                                                       const Matrix& omega2) {
  const auto mom = detail::DataMoments::from(data);
  const auto post = detail::phi_conditional_posterior(mom, prior, omega1, omega2);
  const Matrix l = post.precision_chol;
  const Matrix id = Matrix::Identity(l.rows(), l.cols());
  const Matrix linv = l.triangularView<Eigen::Lower>().solve(id);
  return {post.mean, linv.transpose() * linv};
}

inline Vector draw_phi_given_omegas(const Dataset& data, const PriorSpec& prior,
                                    const Matrix& omega1, const Matrix& omega2,
                                    RngStream& rng) {
  const auto mom = detail::DataMoments::from(data);
  const auto post = detail::phi_conditional_posterior(mom, prior, omega1, omega2);
  return detail::draw_phi(post, rng);
}

inline std::pair<Matrix, Matrix> draw_omegas_given_phi(const Dataset& data,
                                                       const PriorSpec& prior,
                                                       const Vector& phi_b, RngStream& rng) {
  const auto mom = detail::DataMoments::from(data);
  if (mom.t1 <= 0 || mom.t2 <= 0) throw InvalidRegime("draw_omegas: empty regime");
  const Matrix b = detail::unvec_coefficients(phi_b, mom.n, mom.m);
  const Matrix s1 = prior.s1 + mom.residual_cross(b, 1);
  const Matrix s2 = prior.s2 + mom.residual_cross(b, 2);
  Matrix o1 = draw_inverse_wishart(s1, mom.t1 + prior.d1, rng);
  Matrix o2 = draw_inverse_wishart(s2, mom.t2 + prior.d2, rng);
  return {std::move(o1), std::move(o2)};
}

// Incremental Gibbs sampler alternating the two conditional draws. The
// chain starts at the feasible-GLS estimate. Bit-reproducible for a given
// seed and sweep order.
class GibbsSampler {
 public:
  GibbsSampler(const Dataset& data, const PriorSpec& prior, std::uint64_t seed)
      : mom_(detail::DataMoments::from(data)), prior_(prior), rng_(seed) {
    if (mom_.t1 <= 0 || mom_.t2 <= 0) throw InvalidRegime("gibbs: empty regime");
    state_ = gls_estimate(data);
    b_ = state_.B;
  }

  // One full sweep: covariances given coefficients, then coefficients.
  const ReducedForm& sweep() {
    const Matrix s1 = prior_.s1 + mom_.residual_cross(b_, 1);
    const Matrix s2 = prior_.s2 + mom_.residual_cross(b_, 2);
    state_.omega1 = draw_inverse_wishart(s1, mom_.t1 + prior_.d1, rng_);
    state_.omega2 = draw_inverse_wishart(s2, mom_.t2 + prior_.d2, rng_);
    const auto post = detail::phi_conditional_posterior(mom_, prior_, state_.omega1, state_.omega2);
    const Vector phi = detail::draw_phi(post, rng_);
    b_ = detail::unvec_coefficients(phi, mom_.n, mom_.m);
    state_.B = b_;
    state_.stable = is_stable(state_);
    return state_;
  }

  void burn(int sweeps) {
    for (int i = 0; i < sweeps; ++i) sweep();
  }

 private:
  detail::DataMoments mom_;
  PriorSpec prior_;
  RngStream rng_;
  ReducedForm state_;
  Matrix b_;
};

// Run the chain, discard `burn_in` sweeps and keep every `thinning`-th draw
// afterwards.
inline PosteriorDraws run_gibbs(const Dataset& data, const PriorSpec& prior,
                                const GibbsConfig& config) {
  config.validate();
  GibbsSampler chain(data, prior, config.seed);
  chain.burn(config.burn_in);
  PosteriorDraws out;
  out.draws.reserve(config.draws);
  out.stable.reserve(config.draws);
  for (int d = 0; d < config.draws; ++d) {
    for (int t = 1; t < config.thinning; ++t) chain.sweep();
    const ReducedForm& state = chain.sweep();
    out.draws.push_back(state);
    out.stable.push_back(state.stable ? 1 : 0);
  }
  return out;
}

}  // namespace hsvar
