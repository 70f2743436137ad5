#include <catch2/catch_amalgamated.hpp>
#include <hsvar/hsvar.hpp>

#include "helpers.hpp"

using namespace hsvar;
using namespace hsvar::testing;

TEST_CASE("estimate_kurtosis") {
  SECTION("Gaussian residuals have no excess kurtosis") {
    RngStream rng(3);
    const Matrix resid = random_matrix(2, 10000, rng);
    const double k = estimate_kurtosis_regime(resid);
    REQUIRE(std::abs(k) < 0.05);
  }
  SECTION("heavy tails push the estimate up") {
    // Student-t(5) via a normal over an independent chi-square scale
    RngStream rng(5);
    Matrix resid(1, 10000);
    for (int t = 0; t < 10000; ++t) {
      const double z = rng.gaussian();
      const double s = rng.chi_square(5.0) / 5.0;
      resid(0, t) = z / std::sqrt(s);
    }
    REQUIRE(estimate_kurtosis_regime(resid) > 0.5);
  }
  SECTION("constant residuals degenerate") {
    REQUIRE_THROWS_AS(estimate_kurtosis_regime(Matrix::Constant(1, 100, 2.0)),
                      DegenerateMoments);
  }
  SECTION("short regime") {
    REQUIRE_THROWS_AS(estimate_kurtosis_regime(Matrix::Constant(1, 4, 0.0)), RegimeTooShort);
  }
}

TEST_CASE("h_test") {
  SECTION("equal eigenvalues give a zero statistic") {
    Vector lambda(3);
    lambda << 0.4, 0.4, 0.4;
    const HetTestResult r = h_test(lambda, 0, 3, 0.0, 0.0, 1000, 500);
    REQUIRE(r.statistic == Catch::Approx(0.0).margin(1e-9));
    REQUIRE(r.p_value == Catch::Approx(1.0));
  }
  SECTION("degrees of freedom mapping") {
    Vector lambda(3);
    lambda << 3.0, 1.0, 0.5;
    REQUIRE(h_test(lambda, 0, 2, 0.0, 0.0, 100, 50).dof == 2);
    REQUIRE(h_test(lambda, 0, 3, 0.0, 0.0, 100, 50).dof == 5);
    REQUIRE(h_test(lambda, 1, 2, 0.0, 0.0, 100, 50).dof == 2);
  }
  SECTION("reported statistic maps to the reported tail probability") {
    REQUIRE(chi_square_tail(4.2758, 2) == Catch::Approx(0.1179).margin(5e-5));
    REQUIRE(chi_square_tail(79.166, 5) < 1e-4);
  }
  SECTION("invariant to a common rescaling of the tested block") {
    Vector lambda(3);
    lambda << 3.0, 1.2, 0.4;
    const HetTestResult a = h_test(lambda, 1, 2, 0.1, 0.2, 800, 300);
    Vector scaled = lambda;
    scaled(1) *= 7.0;
    scaled(2) *= 7.0;
    const HetTestResult b = h_test(scaled, 1, 2, 0.1, 0.2, 800, 300);
    REQUIRE(a.statistic == Catch::Approx(b.statistic).epsilon(1e-12));
  }
  SECTION("statistic shrinks as kurtosis rises") {
    Vector lambda(2);
    lambda << 2.0, 1.0;
    double prev = h_test(lambda, 0, 2, 0.0, 0.0, 500, 250).statistic;
    for (double kappa : {0.5, 1.0, 2.0}) {
      const double cur = h_test(lambda, 0, 2, kappa, kappa, 500, 250).statistic;
      REQUIRE(cur < prev);
      prev = cur;
    }
  }
  SECTION("positive whenever the tested eigenvalues differ") {
    Vector lambda(2);
    lambda << 1.1, 1.0;
    REQUIRE(h_test(lambda, 0, 2, 0.0, 0.0, 500, 250).statistic > 0.0);
  }
  SECTION("range validation") {
    Vector lambda(3);
    lambda << 3.0, 1.0, 0.5;
    REQUIRE_THROWS_AS(h_test(lambda, 2, 2, 0.0, 0.0, 100, 50), InvalidRange);
    REQUIRE_THROWS_AS(h_test(lambda, 0, 1, 0.0, 0.0, 100, 50), InvalidRange);
  }
}

TEST_CASE("test_suite cascade") {
  SECTION("three variables give three hypotheses") {
    SimulationTruth truth;
    Matrix impact(3, 3);
    impact << 1.0, 0.0, 0.0, 0.3, 1.0, 0.0, -0.2, 0.4, 1.0;
    truth.impact = impact;
    truth.lambda = Vector(3);
    truth.lambda << 4.0, 1.0, 0.25;
    truth.B = diag_lag_coefficients(3, 0.4);
    const Dataset data = simulate(truth, 800, 400, 17);
    const ReducedForm rf = gls_estimate(data);
    const EigenIdentification sol = solve_eigen(rf);
    const auto results = test_suite(sol, data, rf);
    REQUIRE(results.size() == 3);
    REQUIRE(results[0].r == 3);
    REQUIRE(results[0].s == 0);
    REQUIRE(results[1].s == 0);
    REQUIRE(results[1].r == 2);
    REQUIRE(results[2].s == 1);
    REQUIRE(results[2].r == 2);
    // strong heterogeneity: the joint hypothesis is rejected decisively
    REQUIRE(results[0].p_value < 0.01);
  }
  SECTION("two variables give a single hypothesis") {
    SimulationTruth truth;
    Matrix impact(2, 2);
    impact << 1.0, 0.0, 0.5, 1.0;
    truth.impact = impact;
    truth.lambda = Vector(2);
    truth.lambda << 1.0, 1.0;
    truth.B = diag_lag_coefficients(2, 0.3);
    const Dataset data = simulate(truth, 600, 300, 23);
    const ReducedForm rf = gls_estimate(data);
    const auto results = test_suite(solve_eigen(rf), data, rf);
    REQUIRE(results.size() == 1);
    REQUIRE(results[0].r == 2);
  }
  SECTION("size and power on a pooled pattern") {
    // a distinct top eigenvalue with a genuinely equal bottom pair: the
    // joint and top-pair hypotheses reject, the bottom pair keeps its size
    int joint_rej = 0, top_rej = 0, bottom_rej = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      SimulationTruth truth;
      Matrix impact(3, 3);
      impact << 1.0, 0.0, 0.0, 0.3, 1.0, 0.0, -0.2, 0.4, 1.0;
      truth.impact = impact;
      truth.lambda = Vector(3);
      truth.lambda << 4.0, 0.3, 0.3;
      truth.B = diag_lag_coefficients(3, 0.4);
      const Dataset data = simulate(truth, 1200, 600, 70000 + rep);
      const ReducedForm rf = gls_estimate(data);
      const auto results = test_suite(solve_eigen(rf), data, rf);
      if (results[0].p_value < 0.05) ++joint_rej;
      if (results[1].p_value < 0.05) ++top_rej;
      if (results[2].p_value < 0.05) ++bottom_rej;
    }
    REQUIRE(joint_rej == reps);
    REQUIRE(top_rej == reps);
    REQUIRE(bottom_rej < 15);
  }
  SECTION("size under the null at the five percent level") {
    // light version of the calibration experiment: equal shifts, Gaussian
    int rejections = 0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
      SimulationTruth truth;
      Matrix impact(2, 2);
      impact << 1.0, 0.0, 0.4, 0.9;
      truth.impact = impact;
      truth.lambda = Vector(2);
      truth.lambda << 1.0, 1.0;
      truth.B = diag_lag_coefficients(2, 0.5);
      const Dataset data = simulate(truth, 1000, 500, 40000 + rep);
      const ReducedForm rf = ols_estimate(data);
      const auto results = test_suite(solve_eigen(rf), data, rf);
      if (results[0].p_value < 0.05) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / reps;
    REQUIRE(rate > 0.01);
    REQUIRE(rate < 0.12);
  }
}
