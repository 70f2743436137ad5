// End-to-end acceptance suite. Each test case covers one acceptance
// criterion, prints a single PASS/FAIL line, and fails the build if the
// criterion is not met at its stated tolerance.

#include <catch2/catch_amalgamated.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <hsvar/hsvar.hpp>

#include "helpers.hpp"

using namespace hsvar;
using namespace hsvar::testing;

namespace {

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report_line(int id, const std::string& desc, bool ok, double secs) {
  std::printf("[%s] criterion %02d (%.1fs): %s\n", ok ? "PASS" : "FAIL", id, secs, desc.c_str());
  std::fflush(stdout);
}

Matrix fixed_impact3() {
  Matrix impact(3, 3);
  impact << 1.0, 0.0, 0.2, 0.4, 1.0, 0.0, -0.3, 0.2, 1.0;
  return impact;
}

}  // namespace

TEST_CASE("criterion 1: observational-equivalence enumeration") {
  Stopwatch timer;
  bool ok = true;
  RngStream rng(101);
  for (int rep = 0; rep < 50 && ok; ++rep) {
    const int n = rep < 25 ? 2 : 3;
    Vector lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = 0.3 + 4.0 * rng.uniform();
    const Matrix impact = random_matrix(n, n, rng) + 3.0 * Matrix::Identity(n, n);
    const Matrix omega1 = impact * impact.transpose();
    const Matrix omega2 = impact * lambda.asDiagonal() * impact.transpose();
    const auto variants = enumerate_observational_equivalents(impact, lambda);
    int expected = 1;
    for (int i = 2; i <= n; ++i) expected *= i;
    expected <<= n;
    if (static_cast<int>(variants.size()) != expected) ok = false;
    for (const auto& [c, l] : variants) {
      if ((c * c.transpose() - omega1).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + omega1.norm()))
        ok = false;
      if ((c * l.asDiagonal() * c.transpose() - omega2).cwiseAbs().maxCoeff() >
          1e-10 * (1.0 + omega2.norm()))
        ok = false;
    }
  }
  // rotations outside the signed-permutation family break diagonality
  int checked = 0;
  while (checked < 50 && ok) {
    const int n = checked % 2 == 0 ? 2 : 3;
    Vector lambda(n);
    lambda(0) = 3.0;
    for (int i = 1; i < n; ++i) lambda(i) = lambda(i - 1) - 0.4 - rng.uniform();
    const Matrix a = random_orthogonal(n, rng);
    bool signed_perm = true;
    for (int j = 0; j < n; ++j) {
      int nonzero = 0;
      for (int i = 0; i < n; ++i)
        if (std::abs(a(i, j)) > 1e-3) ++nonzero;
      if (nonzero != 1) signed_perm = false;
    }
    if (signed_perm) continue;
    const Matrix rotated = a * lambda.asDiagonal() * a.transpose();
    double offdiag = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) offdiag = std::max(offdiag, std::abs(rotated(i, j)));
    if (!(offdiag > 1e-6)) ok = false;
    ++checked;
  }
  const double secs = timer.seconds();
  if (secs > 10.0) ok = false;
  report_line(1, "sign/permutation equivalents solve both covariance equations", ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 2: eigen and SVD solvers agree") {
  Stopwatch timer;
  bool ok = true;
  RngStream rng(202);
  for (int rep = 0; rep < 200 && ok; ++rep) {
    const int n = 3;
    Vector lambda(n);
    lambda(0) = 2.0 + 3.0 * rng.uniform();
    for (int i = 1; i < n; ++i)
      lambda(i) = lambda(i - 1) * (0.25 + 0.5 * rng.uniform()) - 1e-3;
    // enforce the minimum pairwise gap
    bool gaps = true;
    for (int i = 1; i < n; ++i)
      if (lambda(i - 1) - lambda(i) <= 1e-4) gaps = false;
    if (!gaps || lambda(n - 1) <= 0.0) {
      --rep;
      continue;
    }
    const Matrix impact = random_matrix(n, n, rng) + 3.0 * Matrix::Identity(n, n);
    const ReducedForm rf = rf_from_truth(impact, lambda, Matrix::Zero(n, n + 1));
    const EigenIdentification a = solve_eigen(rf);
    const EigenIdentification b = solve_svd(rf);
    if ((a.lambda - b.lambda).cwiseAbs().maxCoeff() > 1e-8) ok = false;
    for (int j = 0; j < n; ++j)
      if (column_diff_up_to_sign(a.Q.col(j), b.Q.col(j)) > 1e-6) ok = false;
  }
  const double secs = timer.seconds();
  if (secs > 5.0) ok = false;
  report_line(2, "eigen- and SVD-based identification coincide on 200 instances", ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 3: identification recovery from simulated data") {
  Stopwatch timer;
  SimulationTruth truth;
  truth.impact = 0.5 * fixed_impact3();
  truth.lambda = Vector(3);
  truth.lambda << 4.0, 1.0, 0.25;
  truth.B = diag_lag_coefficients(3, 0.4);
  // population solution defines the normalized truth
  const ReducedForm rf_pop = rf_from_truth(truth.impact, truth.lambda, truth.B);
  const EigenIdentification pop = solve_eigen(rf_pop);
  int successes = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    const Dataset data = simulate(truth, 4000, 2000, 3000 + rep);
    const ReducedForm rf = ml_estimate(data);
    const EigenIdentification sol = solve_eigen(rf);
    bool good = true;
    if ((sol.lambda - pop.lambda).norm() > 0.10 * pop.lambda.norm()) good = false;
    if ((sol.C - pop.C).cwiseAbs().maxCoeff() > 0.05) good = false;
    if (good) ++successes;
  }
  const double secs = timer.seconds();
  bool ok = successes >= 95 && secs < 120.0;
  report_line(3, "ML recovers (C, Lambda) in " + std::to_string(successes) + "/100 replications",
              ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 4: identification-test calibration") {
  Stopwatch timer;
  bool ok = true;
  // degrees-of-freedom mapping is exact
  {
    Vector lambda(3);
    lambda << 3.0, 1.0, 0.5;
    if (h_test(lambda, 0, 2, 0.0, 0.0, 100, 50).dof != 2) ok = false;
    if (h_test(lambda, 0, 3, 0.0, 0.0, 100, 50).dof != 5) ok = false;
  }
  // empirical size under the null
  int rejections = 0;
  const int reps = 500;
  for (int rep = 0; rep < reps; ++rep) {
    SimulationTruth truth;
    Matrix impact(2, 2);
    impact << 1.0, 0.0, 0.4, 0.9;
    truth.impact = impact;
    truth.lambda = Vector::Ones(2);
    truth.B = diag_lag_coefficients(2, 0.5);
    const Dataset data = simulate(truth, 1000, 500, 50000 + rep);
    const ReducedForm rf = gls_estimate(data);
    const auto results = test_suite(solve_eigen(rf), data, rf);
    if (results[0].p_value < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  if (!(rate >= 0.03 && rate <= 0.07)) ok = false;
  // optional, non-gating integration check against a user-supplied oil
  // dataset: statistics within 5% of (79.166, 35.569, 4.2758) and the
  // bottom-pair p-value within 0.02 of 0.1179
  std::string note;
  if (const char* oil = std::getenv("HSVAR_OIL_CSV")) {
    try {
      const Dataset data = ingest_csv(oil, 12, "1987-10");
      RunConfig cfg;
      cfg.estimator = "ml";
      const ReducedForm rf = estimate_point(cfg, data);
      const auto results = test_suite(solve_eigen(rf), data, rf);
      const double expected_stats[3] = {79.166, 35.569, 4.2758};
      bool match = std::abs(results[2].p_value - 0.1179) <= 0.02;
      for (int i = 0; i < 3; ++i)
        if (std::abs(results[i].statistic - expected_stats[i]) > 0.05 * expected_stats[i])
          match = false;
      note = " [oil table: H=" + std::to_string(results[0].statistic) +
             " p23=" + std::to_string(results[2].p_value) +
             (match ? " MATCHES" : " DIFFERS") + "]";
    } catch (const Error& e) {
      note = std::string(" [oil data skipped: ") + e.what() + "]";
    }
  }
  const double secs = timer.seconds();
  if (secs > 180.0) ok = false;
  report_line(4,
              "5%-level rejection rate under the null = " + std::to_string(rate) + note, ok,
              secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 5: pooled eigenvalue minimizes the Frobenius distance") {
  Stopwatch timer;
  bool ok = true;
  RngStream rng(505);
  for (int rep = 0; rep < 100 && ok; ++rep) {
    Vector lambda(3);
    lambda << 3.0 + rng.uniform(), 0.6 + 0.8 * rng.uniform(), 0.1 + 0.4 * rng.uniform();
    std::sort(lambda.data(), lambda.data() + 3, std::greater<double>());
    const Matrix impact = random_matrix(3, 3, rng) + 3.0 * Matrix::Identity(3, 3);
    const ReducedForm rf = rf_from_truth(impact, lambda, Matrix::Zero(3, 4));
    const EigenIdentification sol = solve_eigen(rf);
    const Matrix w = sol.Q * sol.lambda.asDiagonal() * sol.Q.transpose();
    const double lo = sol.lambda(2), hi = sol.lambda(1);
    const double mean = 0.5 * (lo + hi);
    const double step = (hi - lo) / 400.0;
    auto frob = [&](double v) {
      Vector lt = sol.lambda;
      lt(1) = lt(2) = v;
      return (w - sol.Q * lt.asDiagonal() * sol.Q.transpose()).norm();
    };
    const double at_mean = frob(mean);
    for (int g = 0; g <= 400; ++g) {
      const double v = lo + g * step;
      const double f = frob(v);
      if (f < at_mean - 1e-12) ok = false;
      if (std::abs(f - at_mean) <= 1e-12 && std::abs(v - mean) > step + 1e-12) ok = false;
    }
  }
  const double secs = timer.seconds();
  if (secs > 10.0) ok = false;
  report_line(5, "block mean beats every grid alternative in Frobenius distance", ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 6: bivariate closed forms against the angle grid") {
  Stopwatch timer;
  bool ok = true;
  RngStream rng(606);
  const int points = 100000;
  int done = 0;
  while (done < 20 && ok) {
    const Matrix m = random_spd(2, rng);
    BivariateCovariances o{m(0, 0), m(1, 1), m(0, 1)};
    if ((done < 10) != (o.opq >= 0.0)) continue;  // first half positive, second negative
    ++done;
    const Matrix l1inv = cholesky_lower(o.matrix()).inverse();
    const Vector w1 = l1inv.col(0), w2 = l1inv.col(1);
    std::vector<double> alphas, betas;
    alphas.reserve(points / 2);
    betas.reserve(points / 2);
    for (int k = 0; k < points; ++k) {
      const double theta = 2.0 * M_PI * k / points;
      Vector q1(2), q2(2);
      q1 << std::cos(theta), std::sin(theta);
      q2 << -q1(1), q1(0);
      if (q2.dot(w2) < 0.0) q2 = -q2;
      if (q1.dot(w1) <= 0.0 || q2.dot(w2) <= 0.0) continue;
      const double beta = -q1.dot(w2) / q1.dot(w1);
      const double alpha = -q2.dot(w1) / q2.dot(w2);
      if (beta > 0.0 || alpha < 0.0) continue;
      alphas.push_back(alpha);
      betas.push_back(beta);
    }
    const BivariateSet set = bivariate_identified_set(o, true);
    auto check_endpoint = [&](std::vector<double>& vals, double target, bool lower_end) {
      std::sort(vals.begin(), vals.end());
      const double extreme = lower_end ? vals.front() : vals.back();
      const double neighbor =
          vals.size() > 1 ? (lower_end ? vals[1] : vals[vals.size() - 2]) : extreme;
      const double tol = 2.0 * std::abs(extreme - neighbor) + 1e-9;
      if (std::abs(extreme - target) > tol) ok = false;
      // the grid never escapes the closed-form interval
      if (lower_end && extreme < target - 1e-9) ok = false;
      if (!lower_end && extreme > target + 1e-9) ok = false;
    };
    if (o.opq >= 0.0) {
      check_endpoint(alphas, set.alpha.lo.value, true);
      if (!set.alpha.hi.infinite) check_endpoint(alphas, set.alpha.hi.value, false);
    } else {
      check_endpoint(betas, set.beta.lo.value, true);
      check_endpoint(betas, set.beta.hi.value, false);
    }
    // point-restriction ratio formulas against the refined grid limit
    if (o.opq > 1e-6) {
      auto beta_at = [&](double theta) {
        Vector q1(2);
        q1 << std::cos(theta), std::sin(theta);
        return -q1.dot(w2) / q1.dot(w1);
      };
      auto alpha_at = [&](double theta) {
        Vector q1(2), q2(2);
        q1 << std::cos(theta), std::sin(theta);
        q2 << -q1(1), q1(0);
        if (q2.dot(w2) < 0.0) q2 = -q2;
        return -q2.dot(w1) / q2.dot(w2);
      };
      double lo = -0.5 * M_PI + 1e-9, hi = 0.5 * M_PI - 1e-9;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (beta_at(lo) * beta_at(mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      const double alpha_limit = alpha_at(0.5 * (lo + hi));
      if (std::abs(alpha_limit - bivariate_ols_point(o, BivariatePointRestriction::beta_zero)) >
          1e-6)
        ok = false;
    }
  }
  const double secs = timer.seconds();
  if (secs > 30.0) ok = false;
  report_line(6, "angle-grid hull reproduces the closed-form interval endpoints", ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 7: bounds collapse under point identification") {
  Stopwatch timer;
  SimulationTruth truth;
  truth.impact = fixed_impact3();
  truth.lambda = Vector(3);
  truth.lambda << 4.0, 1.0, 1.0;
  truth.B = diag_lag_coefficients(3, 0.4);
  const Dataset data = simulate(truth, 400, 200, 707);
  const PriorSpec prior = default_diffuse_prior(3, 4);
  RestrictionSpec rspec;
  rspec.partition.block_sizes = {1, 2};
  rspec.shock_of_interest = 1;
  rspec.zeros.push_back({ZeroRestriction::Target::a0_inv, 0, 0, 1});
  std::vector<EtaFunctional> targets;
  for (int g = 0; g < 3; ++g) {
    targets.push_back({EtaFunctional::Target::ir_h, g, 0});
    targets.push_back({EtaFunctional::Target::ir_h, g, 6});
  }
  AlgoConfig cfg;
  cfg.M = 200;
  cfg.L = 100;
  cfg.seed = 7;
  const BoundsResult res = run_algorithm1(data, prior, rspec, targets, cfg, {}, 500);
  bool ok = res.accepted == 200 && res.status.tag == IdStatus::Tag::point_identified;
  double worst_gap = 0.0;
  for (const auto& cell : res.cells) {
    for (size_t i = 0; i < cell.lower.size(); ++i)
      worst_gap = std::max(worst_gap, cell.upper[i] - cell.lower[i]);
    double mean = 0.0;
    for (double v : cell.retained) mean += v;
    mean /= cell.retained.size();
    if (std::abs(cell.pmb_lo - mean) > 1e-8 || std::abs(cell.pmb_hi - mean) > 1e-8) ok = false;
  }
  if (worst_gap >= 1e-6) ok = false;
  const double secs = timer.seconds();
  if (secs > 120.0) ok = false;
  report_line(7, "point-identified program: max per-draw interval width " +
                     std::to_string(worst_gap),
              ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 8: optimizer bounds envelope the stochastic bounds") {
  Stopwatch timer;
  SimulationTruth truth;
  truth.impact = fixed_impact3();
  truth.lambda = Vector(3);
  truth.lambda << 4.0, 1.0, 1.0;
  truth.B = diag_lag_coefficients(3, 0.4);
  const Dataset data = simulate(truth, 400, 200, 808);
  const PriorSpec prior = default_diffuse_prior(3, 4);
  GibbsConfig gc;
  gc.burn_in = 300;
  gc.draws = 20;
  gc.seed = 11;
  const PosteriorDraws post = run_gibbs(data, prior, gc);
  RestrictionSpec rspec;
  rspec.partition.block_sizes = {1, 2};
  rspec.shock_of_interest = 1;
  rspec.signs.push_back({0, 1, 0, 0, +1});
  const NormalizationRule norm;
  AlgoConfig cfg;
  cfg.multistarts = 5;
  cfg.seed = 13;
  bool ok = true;
  double worst_rel_gap = 0.0;
  const EtaFunctional eta{EtaFunctional::Target::ir_h, 2, 0};
  for (int d = 0; d < 20 && ok; ++d) {
    const ReducedForm& rf = post.draws[static_cast<size_t>(d)];
    EigenIdentification sol = pool_eigenvalues(solve_eigen(rf, norm), rspec.partition);
    const VmaCoefficients vma = vma_coefficients(rf, 0);
    const RestrictionProgram prog = order_variables(compile(rspec, rf, vma, norm));
    RngStream rng_opt = RngStream::derive(99, static_cast<std::uint64_t>(d));
    RngStream rng_st = RngStream::derive(199, static_cast<std::uint64_t>(d));
    const auto outer = optimize_bounds(rf, sol, prog, eta, cfg, rng_opt);
    const auto inner = stochastic_bounds(rf, sol, prog, eta, 10000, rng_st);
    const double width = outer.second - outer.first;
    if (width <= 0.0) {
      ok = false;
      break;
    }
    if (inner.first < outer.first - 1e-9 || inner.second > outer.second + 1e-9) ok = false;
    const double gap =
        std::max(inner.first - outer.first, outer.second - inner.second) / width;
    worst_rel_gap = std::max(worst_rel_gap, gap);
  }
  if (worst_rel_gap >= 0.01) ok = false;
  const double secs = timer.seconds();
  if (secs > 300.0) ok = false;
  report_line(8, "stochastic interval nested in optimizer interval, max endpoint gap " +
                     std::to_string(100.0 * worst_rel_gap) + "% of width",
              ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 9: convex identified sets have no interior gaps") {
  Stopwatch timer;
  SimulationTruth truth;
  truth.impact = fixed_impact3();
  truth.lambda = Vector(3);
  truth.lambda << 4.0, 1.0, 1.0;
  truth.B = diag_lag_coefficients(3, 0.4);
  const Dataset data = simulate(truth, 400, 200, 909);
  const PriorSpec prior = default_diffuse_prior(3, 4);
  GibbsConfig gc;
  gc.burn_in = 300;
  gc.draws = 20;
  gc.seed = 17;
  const PosteriorDraws post = run_gibbs(data, prior, gc);
  RestrictionSpec rspec;
  rspec.partition.block_sizes = {1, 2};
  rspec.shock_of_interest = 1;
  rspec.signs.push_back({0, 1, 0, 0, +1});
  const NormalizationRule norm;
  bool ok = true;
  bool saw_tag = false;
  for (int d = 0; d < 20 && ok; ++d) {
    const ReducedForm& rf = post.draws[static_cast<size_t>(d)];
    EigenIdentification sol = pool_eigenvalues(solve_eigen(rf, norm), rspec.partition);
    const VmaCoefficients vma = vma_coefficients(rf, 12);
    const RestrictionProgram prog = order_variables(compile(rspec, rf, vma, norm));
    const IdStatus st = classify(prog, &sol);
    if (st.convexity == IdStatus::Convexity::none) continue;
    saw_tag = true;
    for (int h : {0, 12}) {
      const EtaFunctional eta{EtaFunctional::Target::ir_h, 2, h};
      const Vector c = eta_row(rf, vma, sol.omega1_tr, eta);
      RngStream rng = RngStream::derive(2900, static_cast<std::uint64_t>(d * 31 + h));
      std::vector<double> values;
      int guard = 0;
      while (static_cast<int>(values.size()) < 200 && guard < 20000) {
        ++guard;
        auto q = detail::try_draw_admissible(sol, prog, rng);
        if (q.has_value()) values.push_back(c.dot(q->col(prog.j_star)));
      }
      if (values.size() < 200) {
        ok = false;
        break;
      }
      std::sort(values.begin(), values.end());
      // no adjacent gap may dwarf the largest spacing in its neighborhood
      const int window = 15;
      for (size_t i = 1; i < values.size() && ok; ++i) {
        const double gap = values[i] - values[i - 1];
        double local = 0.0;
        const size_t lo = i > static_cast<size_t>(window) ? i - window : 1;
        const size_t hi = std::min(values.size() - 1, i + window);
        for (size_t k = lo; k <= hi; ++k)
          if (k != i) local = std::max(local, values[k] - values[k - 1]);
        if (local > 0.0 && gap > 5.0 * local) ok = false;
      }
    }
  }
  if (!saw_tag) ok = false;
  const double secs = timer.seconds();
  if (secs > 120.0) ok = false;
  report_line(9, "200 admissible draws leave no interior gap above 5x local spacing", ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 10: robust-Bayes outputs on the full pipeline") {
  Stopwatch timer;
  SimulationTruth truth;
  truth.impact = fixed_impact3();
  truth.lambda = Vector(3);
  truth.lambda << 6.0, 1.0, 1.0;
  truth.B = diag_lag_coefficients(3, 0.4);
  const Dataset data = simulate(truth, 600, 300, 1010);
  bool ok = true;

  // credible-region width is monotone in the credibility level
  {
    const PriorSpec prior = default_diffuse_prior(3, 4);
    RestrictionSpec rspec;
    rspec.partition.block_sizes = {1, 2};
    rspec.shock_of_interest = 1;
    rspec.signs.push_back({0, 1, 0, 0, +1});   // production rises on impact
    rspec.signs.push_back({2, 1, 0, 11, +1});  // price stays up for a year
    rspec.signs.push_back({1, 2, 0, 0, +1});
    std::vector<EtaFunctional> targets;
    for (int g = 0; g < 3; ++g)
      for (int h = 0; h <= 12; ++h) targets.push_back({EtaFunctional::Target::ir_h, g, h});
    AlgoConfig cfg;
    cfg.M = 1000;
    cfg.L = 3000;
    cfg.seed = 23;
    cfg.alpha = 0.68;
    const BoundsResult res = run_algorithm1(data, prior, rspec, targets, cfg, {}, 1000);
    if (res.accepted != 1000) ok = false;
    for (const auto& cell : res.cells) {
      if (!(cell.informativeness >= 0.0 && cell.informativeness <= 1.0)) ok = false;
      if (!(cell.pmb_lo <= cell.pmb_hi)) ok = false;
      double prev_width = -1.0;
      for (double alpha : {0.5, 0.68, 0.9}) {
        const RobustRegion r = robust_credible_region(cell.lower, cell.upper, alpha);
        const double width = r.hi - r.lo;
        if (width < prev_width - 1e-12) ok = false;
        prev_width = width;
      }
    }
  }

  // the batch pipeline completes at M = 1000 with sane outputs everywhere
  {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "hsvar_acceptance_c10";
    fs::create_directories(base);
    const std::string csv = (base / "sim.csv").string();
    CsvTable table;
    table.header = data.variable_names;
    table.has_dates = false;
    Matrix all(3, data.presample.cols() + data.observations.cols());
    all << data.presample, data.observations;
    table.values = all.transpose();
    write_csv(csv, table);
    const std::string restr = (base / "signs.txt").string();
    {
      std::ofstream out(restr);
      out << "pool 2..3\ninterest 2\n"
          << "sign IR 0 1 2 +\nsign IR 0..11 3 2 +\nsign IR 0 2 3 +\n";
    }
    RunConfig cfg = parse_config_text(
        "data = " + csv + "\nbreak = 301\nlags = 1\nestimator = gls\nrestrictions = " + restr +
        "\nM = 1000\nL = 3000\nburn_in = 1000\nhorizons = 12\nseed = 23\nalpha = 0.68\n");
    cfg.out_dir = (base / "out").string();
    const Report rep = run(cfg);
    if (rep.id_status.tag != IdStatus::Tag::set_identified) ok = false;
    if (rep.bands.size() != 3 || rep.bands[0].has_bounds || !rep.bands[1].has_bounds ||
        !rep.bands[2].has_bounds)
      ok = false;
    for (const auto& bands : rep.bands) {
      if (!bands.has_bounds) continue;
      for (const auto& pv : bands.per_variable)
        for (const auto& row : pv) {
          if (!(row.informativeness >= 0.0 && row.informativeness <= 1.0)) ok = false;
          if (!(row.pmb_lo <= row.pmb_hi)) ok = false;
        }
    }
    if (!fs::exists(cfg.out_dir + "/report.txt")) ok = false;
    if (!fs::exists(cfg.out_dir + "/irf_v3_s2.csv")) ok = false;
  }

  const double secs = timer.seconds();
  if (secs > 1800.0) ok = false;
  report_line(10, "M=1000 pipeline complete; informativeness in [0,1]; widths monotone in alpha",
              ok, secs);
  REQUIRE(ok);
}

TEST_CASE("criterion 11: Gibbs posterior agrees with ML on strong data") {
  Stopwatch timer;
  SimulationTruth truth;
  Matrix impact(2, 2);
  impact << 1.0, 0.0, 0.5, 1.0;
  truth.impact = impact;
  truth.lambda = Vector(2);
  truth.lambda << 4.0, 0.25;
  truth.B = diag_lag_coefficients(2, 0.5);
  const Dataset data = simulate(truth, 5000, 2500, 1111);
  const PriorSpec prior = default_diffuse_prior(2, 3);
  GibbsConfig gc;
  gc.burn_in = 500;
  gc.draws = 1000;
  gc.seed = 29;
  const PosteriorDraws post = run_gibbs(data, prior, gc);
  const PosteriorDraws post2 = run_gibbs(data, prior, gc);
  bool ok = true;
  for (size_t i = 0; i < post.draws.size(); ++i) {
    if ((post.draws[i].B - post2.draws[i].B).cwiseAbs().maxCoeff() != 0.0) ok = false;
    if ((post.draws[i].omega1 - post2.draws[i].omega1).cwiseAbs().maxCoeff() != 0.0) ok = false;
  }
  const ReducedForm ml = ml_estimate(data);
  const double k = static_cast<double>(post.draws.size());
  auto check_block = [&](auto getter, const Matrix& target) {
    Matrix mean = getter(post.draws[0]);
    mean.setZero();
    for (const auto& d : post.draws) mean += getter(d);
    mean /= k;
    Matrix var = mean;
    var.setZero();
    for (const auto& d : post.draws) var += (getter(d) - mean).cwiseAbs2();
    var /= k;
    const Matrix mc_se = (var / k).cwiseSqrt();
    for (Eigen::Index i = 0; i < mean.rows(); ++i)
      for (Eigen::Index j = 0; j < mean.cols(); ++j)
        if (std::abs(mean(i, j) - target(i, j)) > 3.0 * mc_se(i, j)) ok = false;
  };
  check_block([](const ReducedForm& d) { return d.B; }, ml.B);
  check_block([](const ReducedForm& d) { return d.omega1; }, ml.omega1);
  check_block([](const ReducedForm& d) { return d.omega2; }, ml.omega2);
  const double secs = timer.seconds();
  if (secs > 300.0) ok = false;
  report_line(11, "posterior means within 3 Monte Carlo standard errors of ML; chains replay",
              ok, secs);
  REQUIRE(ok);
}
