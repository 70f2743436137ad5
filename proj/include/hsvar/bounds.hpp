#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/gibbs.hpp"
#include "hsvar/ident.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/restrictions.hpp"
#include "hsvar/rng.hpp"

namespace hsvar {

// Scalar functional of interest, linear in the column of the shock of
// interest for a fixed reduced form.
struct EtaFunctional {
  enum class Target { ir_h, ir_inf, cir_inf };
  Target target = Target::ir_h;
  int g = 0;  // responding variable
  int h = 0;  // horizon (ir_h only)
};

// Coefficient row c'(phi) with eta = c' q_{j*}.
inline Vector eta_row(const ReducedForm& rf, const VmaCoefficients& vma, const Matrix& omega1_tr,
                      const EtaFunctional& eta) {
  const int n = static_cast<int>(rf.n_vars());
  if (eta.g < 0 || eta.g >= n) throw IndexOutOfBounds("eta_row: variable out of range");
  switch (eta.target) {
    case EtaFunctional::Target::ir_h:
      if (eta.h < 0 || eta.h > vma.horizons)
        throw HorizonExceeded("eta_row: horizon beyond computed VMA");
      return (vma.C[eta.h] * omega1_tr).row(eta.g).transpose();
    case EtaFunctional::Target::ir_inf: {
      const Matrix a = Matrix::Identity(n, n) - rf.lag_sum();
      return (a * omega1_tr).row(eta.g).transpose();
    }
    case EtaFunctional::Target::cir_inf:
    default: {
      const Matrix a = Matrix::Identity(n, n) - rf.lag_sum();
      const Vector lhs = a.transpose().partialPivLu().solve(Vector::Unit(n, eta.g));
      return omega1_tr.transpose() * lhs;
    }
  }
}

struct AlgoConfig {
  int M = 1000;             // accepted-draw target
  int L = 3000;             // sign-check attempts per posterior draw
  int multistarts = 5;      // optimizer starts
  int K = 10000;            // stochastic-approximation iterations
  int eta_grid = 400;       // robust-region grid resolution
  double alpha = 0.68;      // credibility
  std::uint64_t seed = 1;
  bool stochastic_step5 = false;
  int threads = 1;
  int max_posterior_draws = 0;  // 0: 50 * M

  void validate() const {
    if (M < 1 || L < 1 || K < 1 || multistarts < 1 || eta_grid < 2)
      throw ValidationError("algo config: M, L, K, multistarts >= 1, eta_grid >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("algo config: alpha in (0,1)");
  }
};

namespace detail {

// One pass of the sequential projection construction. Returns the full Q
// (columns in eigen-position order) or nothing when a sign row fails or a
// projection residual degenerates.
inline std::optional<Matrix> try_draw_admissible(const EigenIdentification& sol,
                                                 const RestrictionProgram& prog,
                                                 RngStream& rng) {
  const int n = prog.n();
  Matrix q = Matrix::Zero(n, n);
  for (int b = 0; b < prog.partition.n_blocks(); ++b) {
    const int start = prog.partition.block_start(b);
    const int m = prog.partition.block_sizes[b];
    if (m == 1) {
      const int pos = start;
      Vector col = sol.Q.col(pos);
      if (prog.norm_rows.row(pos).dot(col) < 0.0) col = -col;
      q.col(pos) = col;
      continue;
    }
    // complement basis: eigenvectors of every other block
    Matrix complement(n, n - m);
    int cidx = 0;
    for (int b2 = 0; b2 < prog.partition.n_blocks(); ++b2) {
      if (b2 == b) continue;
      const int s2 = prog.partition.block_start(b2);
      for (int k = 0; k < prog.partition.block_sizes[b2]; ++k)
        complement.col(cidx++) = sol.Q.col(s2 + k);
    }
    Matrix built(n, 0);
    for (int k = 0; k < m; ++k) {
      const int pos = prog.build_order[start + k];
      const Eigen::Index fj = prog.F[pos].rows();
      Matrix basis(n, fj + (n - m) + built.cols());
      for (Eigen::Index r = 0; r < fj; ++r) basis.col(r) = prog.F[pos].row(r).transpose();
      basis.middleCols(fj, n - m) = complement;
      if (built.cols() > 0) basis.rightCols(built.cols()) = built;
      Vector z(n);
      for (int i = 0; i < n; ++i) z(i) = rng.gaussian();
      Vector res = project_out(z, basis);
      const double nr = res.norm();
      if (nr < 1e-12) return std::nullopt;  // degenerate projection, counts as an attempt
      res /= nr;
      if (prog.norm_rows.row(pos).dot(res) < 0.0) res = -res;
      q.col(pos) = res;
      built.conservativeResize(n, built.cols() + 1);
      built.col(built.cols() - 1) = res;
    }
  }
  // admissibility: every sign row holds weakly
  for (int j = 0; j < n; ++j) {
    if (prog.S[j].rows() == 0) continue;
    const Vector slack = prog.S[j] * q.col(j);
    if (slack.minCoeff() < -1e-12) return std::nullopt;
  }
  return q;
}

}  // namespace detail

// Sequential-projection draw from the admissible set, repeated up to L
// times before the set is approximated as empty for this reduced form.
inline std::optional<Matrix> draw_admissible_Q(const EigenIdentification& sol,
                                               const RestrictionProgram& prog, RngStream& rng,
                                               int L) {
  if (!prog.ordered) throw ValidationError("draw_admissible_Q: program must be ordered");
  for (int attempt = 0; attempt < L; ++attempt) {
    auto q = detail::try_draw_admissible(sol, prog, rng);
    if (q.has_value()) return q;
  }
  return std::nullopt;
}

namespace detail {

// Feasible subspace for the column of the shock of interest: orthogonal to
// the other blocks' eigenvectors, to the exactly-identified leading columns
// of its own block, and to its zero rows.
struct InterestSubspace {
  Matrix basis;       // n x d orthonormal
  Matrix ineq_rows;   // sign rows plus normalization row, acting on q
};

inline InterestSubspace interest_subspace(const EigenIdentification& sol,
                                          const RestrictionProgram& prog) {
  const int n = prog.n();
  const int bi = prog.partition.block_of(prog.j_star);
  const int start = prog.partition.block_start(bi);
  const int m = prog.partition.block_sizes[bi];
  Matrix rows = prog.F[prog.j_star];
  for (int b2 = 0; b2 < prog.partition.n_blocks(); ++b2) {
    if (b2 == bi) continue;
    const int s2 = prog.partition.block_start(b2);
    for (int k = 0; k < prog.partition.block_sizes[b2]; ++k) {
      rows.conservativeResize(rows.rows() + 1, n);
      rows.row(rows.rows() - 1) = sol.Q.col(s2 + k).transpose();
    }
  }
  // exactly identified leading columns of the block are fixed vectors
  const Matrix v = sol.Q.middleCols(start, m);
  Matrix built(m, 0);
  for (int k = 0; k < m; ++k) {
    const int pos = prog.build_order[start + k];
    if (pos == prog.j_star) break;
    Matrix sys(prog.F[pos].rows() + built.cols(), m);
    if (prog.F[pos].rows() > 0) sys.topRows(prog.F[pos].rows()) = prog.F[pos] * v;
    for (Eigen::Index c = 0; c < built.cols(); ++c)
      sys.row(prog.F[pos].rows() + c) = built.col(c).transpose();
    const Matrix nullb = null_space_of_rows(sys);
    if (nullb.cols() != 1) break;  // not exactly identified from here on
    Vector x = nullb.col(0);
    Vector qcol = v * x;
    if (prog.norm_rows.row(pos).dot(qcol) < 0.0) {
      x = -x;
      qcol = -qcol;
    }
    rows.conservativeResize(rows.rows() + 1, n);
    rows.row(rows.rows() - 1) = qcol.transpose();
    built.conservativeResize(m, built.cols() + 1);
    built.col(built.cols() - 1) = x;
  }
  InterestSubspace out;
  out.basis = null_space_of_rows(rows);
  out.ineq_rows = prog.S[prog.j_star];
  out.ineq_rows.conservativeResize(out.ineq_rows.rows() + 1, n);
  out.ineq_rows.row(out.ineq_rows.rows() - 1) = prog.norm_rows.row(prog.j_star);
  return out;
}

inline bool ineq_feasible(const Matrix& a, const Vector& x, double tol = 1e-12) {
  if (a.rows() == 0) return true;
  return (a * x).minCoeff() >= -tol;
}

// Projection of x onto the sphere intersected with {a_k' x >= 0}: repeated
// single-constraint projections followed by renormalization.
inline bool project_feasible(const Matrix& a, Vector& x) {
  for (int pass = 0; pass < 100; ++pass) {
    if (x.norm() < 1e-14) return false;
    x.normalize();
    if (a.rows() == 0) return true;
    Eigen::Index worst = 0;
    const double v = (a * x).minCoeff(&worst);
    if (v >= -1e-12) return true;
    const Vector row = a.row(worst).transpose();
    x -= (row.dot(x) / row.squaredNorm()) * row;
  }
  return false;
}

// Maximize c'x over the unit sphere intersected with halfspaces by
// projected gradient ascent with backtracking.
inline double sphere_linear_max(const Vector& c, const Matrix& a, const std::vector<Vector>& starts) {
  double best = -std::numeric_limits<double>::infinity();
  const double cn = c.norm();
  std::vector<Vector> all_starts = starts;
  if (cn > 1e-14) {
    Vector x0 = c / cn;
    if (project_feasible(a, x0) && ineq_feasible(a, x0)) all_starts.push_back(x0);
  }
  for (const Vector& s0 : all_starts) {
    Vector x = s0;
    if (!ineq_feasible(a, x)) {
      if (!project_feasible(a, x) || !ineq_feasible(a, x)) continue;
    }
    double val = c.dot(x);
    double step = 1.0;
    for (int it = 0; it < 500; ++it) {
      const Vector g = c - c.dot(x) * x;
      if (step * g.norm() < 1e-9) break;
      Vector cand = x + step * g;
      if (!project_feasible(a, cand)) {
        step *= 0.5;
        continue;
      }
      const double cv = c.dot(cand);
      if (cv > val + 1e-15 && ineq_feasible(a, cand)) {
        x = cand;
        val = cv;
        step = std::min(1.0, step * 1.5);
      } else {
        step *= 0.5;
        if (step < 1e-13) break;
      }
    }
    best = std::max(best, val);
  }
  return best;
}

}  // namespace detail

// Lower and upper bounds of the identified set of eta over the admissible
// set, by multistart projected gradient on the sphere of the feasible
// subspace of q_{j*}. Starts come from admissible draws.
inline std::pair<double, double> optimize_bounds(const ReducedForm& rf,
                                                 const EigenIdentification& sol,
                                                 const RestrictionProgram& prog,
                                                 const EtaFunctional& eta,
                                                 const AlgoConfig& config, RngStream& rng,
                                                 const std::vector<Matrix>* start_qs = nullptr) {
  if (!prog.ordered) throw ValidationError("optimize_bounds: program must be ordered");
  const VmaCoefficients vma =
      vma_coefficients(rf, eta.target == EtaFunctional::Target::ir_h ? eta.h : 0);
  const Vector c = eta_row(rf, vma, sol.omega1_tr, eta);
  const auto sub = detail::interest_subspace(sol, prog);
  const Eigen::Index d = sub.basis.cols();
  if (d == 0) throw NoFeasibleStart("optimize_bounds: equality constraints leave no direction");
  const Vector ct = sub.basis.transpose() * c;
  const Matrix at = sub.ineq_rows * sub.basis;
  if (d == 1) {
    Vector x = Vector::Ones(1);
    if (!detail::ineq_feasible(at, x)) x = -x;
    if (!detail::ineq_feasible(at, x))
      throw NoFeasibleStart("optimize_bounds: singleton direction violates sign rows");
    const double v = ct.dot(x);
    return {v, v};
  }
  // collect admissible starts in the reduced coordinates
  std::vector<Vector> starts;
  if (start_qs != nullptr)
    for (const Matrix& q : *start_qs) starts.push_back(sub.basis.transpose() * q.col(prog.j_star));
  int guard = 0;
  while (static_cast<int>(starts.size()) < config.multistarts && guard < 50 * config.multistarts) {
    ++guard;
    auto q = detail::try_draw_admissible(sol, prog, rng);
    if (q.has_value()) starts.push_back(sub.basis.transpose() * q->col(prog.j_star));
  }
  if (starts.empty()) throw NoFeasibleStart("optimize_bounds: no admissible start found");
  double upper = detail::sphere_linear_max(ct, at, starts);
  double lower = -detail::sphere_linear_max(-ct, at, starts);
  if (lower > upper) std::swap(lower, upper);
  return {lower, upper};
}

// Draw-based alternative: min and max of the functional over K admissible
// draws; an inner approximation of the optimizer interval.
inline std::pair<double, double> stochastic_bounds(const ReducedForm& rf,
                                                   const EigenIdentification& sol,
                                                   const RestrictionProgram& prog,
                                                   const EtaFunctional& eta, int k_iters,
                                                   RngStream& rng) {
  if (!prog.ordered) throw ValidationError("stochastic_bounds: program must be ordered");
  const VmaCoefficients vma =
      vma_coefficients(rf, eta.target == EtaFunctional::Target::ir_h ? eta.h : 0);
  const Vector c = eta_row(rf, vma, sol.omega1_tr, eta);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  int hits = 0;
  for (int k = 0; k < k_iters; ++k) {
    auto q = detail::try_draw_admissible(sol, prog, rng);
    if (!q.has_value()) continue;
    const double v = c.dot(q->col(prog.j_star));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++hits;
  }
  if (hits == 0) throw AllDrawsEmpty("stochastic_bounds: no admissible draw in K iterations");
  return {lo, hi};
}

// Shortest interval containing ceil(alpha * N) of the sorted sample points.
inline std::pair<double, double> hpd_region(std::vector<double> samples, double alpha) {
  if (samples.empty()) throw ValidationError("hpd_region: empty sample");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("hpd_region: alpha in (0,1]");
  std::sort(samples.begin(), samples.end());
  const int n = static_cast<int>(samples.size());
  const int k = std::min(n, std::max(1, static_cast<int>(std::ceil(alpha * n))));
  double best_lo = samples.front(), best_hi = samples.back();
  double best_w = best_hi - best_lo;
  for (int i = 0; i + k - 1 < n; ++i) {
    const double w = samples[i + k - 1] - samples[i];
    if (w < best_w) {
      best_w = w;
      best_lo = samples[i];
      best_hi = samples[i + k - 1];
    }
  }
  return {best_lo, best_hi};
}

struct RobustRegion {
  double lo = 0, hi = 0, center = 0, radius = 0, grid_step = 0;
};

// Smallest interval whose posterior probability of covering the identified
// set is at least alpha: center minimizes the alpha-quantile of
// d(eta, phi) = max(|eta - l|, |eta - u|) over an eta grid.
inline RobustRegion robust_credible_region(const std::vector<double>& lower,
                                           const std::vector<double>& upper, double alpha,
                                           int n_grid = 400) {
  if (lower.empty() || lower.size() != upper.size())
    throw ValidationError("robust_credible_region: bad samples");
  const int m = static_cast<int>(lower.size());
  const int k = std::min(m, std::max(1, static_cast<int>(std::ceil(alpha * m))));
  const double lo_min = *std::min_element(lower.begin(), lower.end());
  const double up_max = *std::max_element(upper.begin(), upper.end());
  const double span = std::max(up_max - lo_min, 0.0);
  const double pad = span > 0 ? span / 10.0 : std::max(1.0, std::abs(lo_min)) * 1e-6;
  const double g0 = lo_min - pad, g1 = up_max + pad;
  const double step = (g1 - g0) / (n_grid - 1);
  std::vector<double> d(m);
  RobustRegion best;
  best.radius = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_grid; ++i) {
    const double eta = g0 + i * step;
    for (int j = 0; j < m; ++j)
      d[j] = std::max(std::abs(eta - lower[j]), std::abs(eta - upper[j]));
    std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
    const double z = d[k - 1];
    if (z < best.radius) {
      best.radius = z;
      best.center = eta;
    }
  }
  best.lo = best.center - best.radius;
  best.hi = best.center + best.radius;
  best.grid_step = step;
  return best;
}

// Per-target output of the full algorithm.
struct BoundCell {
  EtaFunctional target;
  std::vector<double> lower, upper;  // l(phi_m), u(phi_m) over accepted draws
  std::vector<double> retained;      // value at the retained admissible Q
  double pmb_lo = 0, pmb_hi = 0;     // posterior mean bounds
  RobustRegion rcr;
  double hpd_lo = 0, hpd_hi = 0;     // single-prior highest posterior density
  double informativeness = 0;        // 1 - widthHPD/widthRobust, clamped to [0,1]
};

struct BoundsResult {
  int shock = 0;  // eigen position of the shock of interest
  IdStatus status;
  std::vector<BoundCell> cells;
  int accepted = 0;
  int attempted = 0;         // posterior draws consumed
  int unstable_skipped = 0;  // skipped because a long-run target needs stability
  double emptiness_rate = 0;
};

namespace detail {

struct DrawOutput {
  bool empty = false;
  bool unstable_skip = false;
  std::vector<double> lower, upper, retained;
};

struct Algo1Context {
  const RestrictionSpec* rspec;
  const std::vector<EtaFunctional>* targets;
  const AlgoConfig* config;
  NormalizationRule norm;
  int max_horizon = 0;
  bool needs_stability = false;
};

inline DrawOutput process_draw(const ReducedForm& rf, const Algo1Context& ctx,
                               std::uint64_t draw_index, IdStatus* status_out) {
  DrawOutput out;
  if (ctx.needs_stability && !rf.stable) {
    out.unstable_skip = true;
    return out;
  }
  RngStream rng = RngStream::derive(ctx.config->seed, draw_index);
  EigenIdentification sol = solve_eigen(rf, ctx.norm);
  if (!ctx.rspec->partition.block_sizes.empty())
    sol = pool_eigenvalues(std::move(sol), ctx.rspec->partition);
  const VmaCoefficients vma = vma_coefficients(rf, ctx.max_horizon);
  RestrictionProgram prog = order_variables(compile(*ctx.rspec, rf, vma, ctx.norm));
  if (status_out != nullptr) *status_out = classify(prog, &sol);
  auto q = draw_admissible_Q(sol, prog, rng, ctx.config->L);
  if (!q.has_value()) {
    out.empty = true;
    return out;
  }
  const std::vector<Matrix> starts{*q};
  for (const auto& eta : *ctx.targets) {
    const Vector c = eta_row(rf, vma, sol.omega1_tr, eta);
    const double v = c.dot(q->col(prog.j_star));
    double lo, hi;
    if (ctx.config->stochastic_step5) {
      auto b = stochastic_bounds(rf, sol, prog, eta, ctx.config->K, rng);
      lo = b.first;
      hi = b.second;
    } else {
      auto b = optimize_bounds(rf, sol, prog, eta, *ctx.config, rng, &starts);
      lo = b.first;
      hi = b.second;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    out.lower.push_back(lo);
    out.upper.push_back(hi);
    out.retained.push_back(v);
  }
  return out;
}

}  // namespace detail

// Algorithm: posterior draws of the reduced form, per-draw eigen solution
// pooled to the declared multiplicity, admissible-Q construction with
// emptiness detection, per-draw bounds of the identified set, posterior
// mean bounds, robust credible region, and the single-prior HPD region.
// Steps over posterior draws run on a small worker pool; per-draw RNG
// streams are derived from the seed and the draw index so parallel and
// serial runs produce identical accepted sets.
inline BoundsResult run_algorithm1(const Dataset& data, const PriorSpec& prior,
                                   const RestrictionSpec& rspec,
                                   const std::vector<EtaFunctional>& targets,
                                   const AlgoConfig& config, const NormalizationRule& norm = {},
                                   int gibbs_burn_in = 1000,
                                   const PosteriorDraws* posterior = nullptr) {
  config.validate();
  if (targets.empty()) throw ValidationError("run_algorithm1: no target functionals");
  detail::Algo1Context ctx;
  ctx.rspec = &rspec;
  ctx.targets = &targets;
  ctx.config = &config;
  ctx.norm = norm;
  ctx.max_horizon = rspec.max_horizon();
  for (const auto& t : targets) {
    if (t.target == EtaFunctional::Target::ir_h) ctx.max_horizon = std::max(ctx.max_horizon, t.h);
    if (t.target != EtaFunctional::Target::ir_h) ctx.needs_stability = true;
  }

  BoundsResult res;
  res.shock = rspec.shock_of_interest;
  res.cells.resize(targets.size());
  for (size_t i = 0; i < targets.size(); ++i) res.cells[i].target = targets[i];

  const int max_draws = config.max_posterior_draws > 0 ? config.max_posterior_draws : 50 * config.M;
  std::unique_ptr<GibbsSampler> chain;
  if (posterior == nullptr) {
    chain = std::make_unique<GibbsSampler>(data, prior, config.seed);
    chain->burn(gibbs_burn_in);
  }

  const int threads = std::max(1, config.threads);
  int empties = 0;
  bool have_status = false;
  std::uint64_t draw_index = 0;
  while (res.accepted < config.M && res.attempted < max_draws) {
    // next batch of posterior draws
    const int batch = std::min(max_draws - res.attempted,
                               std::max(threads, std::min(64, config.M - res.accepted + 8)));
    std::vector<ReducedForm> phis;
    phis.reserve(batch);
    for (int i = 0; i < batch; ++i) {
      if (posterior != nullptr) {
        if (draw_index + i >= posterior->draws.size()) break;
        phis.push_back(posterior->draws[draw_index + i]);
      } else {
        phis.push_back(chain->sweep());
      }
    }
    if (phis.empty()) break;
    std::vector<detail::DrawOutput> outs(phis.size());
    std::vector<IdStatus> statuses(phis.size());
    auto work = [&](int stride) {
      for (size_t i = static_cast<size_t>(stride); i < phis.size(); i += threads)
        outs[i] = detail::process_draw(phis[i], ctx, draw_index + i,
                                       have_status ? nullptr : &statuses[i]);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::future<void>> tasks;
      for (int t = 0; t < threads; ++t) tasks.push_back(std::async(std::launch::async, work, t));
      for (auto& t : tasks) t.get();
    }
    if (!have_status && !phis.empty()) {
      res.status = statuses[0];
      have_status = true;
    }
    for (size_t i = 0; i < outs.size() && res.accepted < config.M; ++i) {
      ++res.attempted;
      if (outs[i].unstable_skip) {
        ++res.unstable_skipped;
        continue;
      }
      if (outs[i].empty) {
        ++empties;
        if (res.attempted >= 200 && empties > 0.95 * res.attempted)
          throw AcceptanceTooLow("run_algorithm1: more than 95% of posterior draws give an "
                                 "empty admissible set");
        continue;
      }
      for (size_t c = 0; c < res.cells.size(); ++c) {
        res.cells[c].lower.push_back(outs[i].lower[c]);
        res.cells[c].upper.push_back(outs[i].upper[c]);
        res.cells[c].retained.push_back(outs[i].retained[c]);
      }
      ++res.accepted;
    }
    draw_index += phis.size();
  }
  if (res.accepted < config.M)
    throw AcceptanceTooLow("run_algorithm1: only " + std::to_string(res.accepted) + " of " +
                           std::to_string(config.M) + " accepted draws after " +
                           std::to_string(res.attempted) + " posterior draws");
  res.emptiness_rate =
      res.attempted > res.unstable_skipped
          ? static_cast<double>(empties) / (res.attempted - res.unstable_skipped)
          : 0.0;

  for (auto& cell : res.cells) {
    double sl = 0, su = 0;
    for (double v : cell.lower) sl += v;
    for (double v : cell.upper) su += v;
    cell.pmb_lo = sl / cell.lower.size();
    cell.pmb_hi = su / cell.upper.size();
    cell.rcr = robust_credible_region(cell.lower, cell.upper, config.alpha, config.eta_grid);
    auto hpd = hpd_region(cell.retained, config.alpha);
    cell.hpd_lo = hpd.first;
    cell.hpd_hi = hpd.second;
    const double w_r = cell.rcr.hi - cell.rcr.lo;
    const double w_h = cell.hpd_hi - cell.hpd_lo;
    cell.informativeness = w_r > 0 ? std::clamp(1.0 - w_h / w_r, 0.0, 1.0) : 0.0;
  }
  return res;
}

}  // namespace hsvar
