// Batch front end for the heteroskedastic-SVAR toolkit: simulation, reduced-
// form estimation, identification diagnostics, and the robust-bounds
// pipeline. Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <hsvar/hsvar.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace hsvar;

void print_matrix(const std::string& label, const Matrix& m) {
  std::cout << label << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::cout << std::setw(12) << std::setprecision(5) << m(i, j);
    std::cout << "\n";
  }
}

RunConfig load_config(const std::string& path, const std::string& seed_override,
                      const std::string& out_override) {
  RunConfig cfg = parse_config(path);
  if (!seed_override.empty()) cfg.seed = std::stoull(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  return cfg;
}

Dataset load_dataset(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw ValidationError("config: data path missing");
  if (cfg.break_spec.empty()) throw ValidationError("config: break specifier missing");
  return ingest_csv(cfg.data_path, cfg.lags, cfg.break_spec);
}

void print_eigen_and_tests(const RunConfig& cfg, const Dataset& data) {
  const ReducedForm rf = estimate_point(cfg, data);
  const EigenIdentification sol = solve_eigen(rf, cfg.normalization());
  std::cout << "Estimated eigenvalues (descending):\n";
  for (Eigen::Index i = 0; i < sol.lambda.size(); ++i)
    std::cout << "  lambda_" << (i + 1) << " = " << sol.lambda(i) << "\n";
  const auto tests = test_suite(sol, data, rf);
  std::cout << "\nIdentification-through-heteroskedasticity tests\n";
  std::cout << "  kappa1 = " << tests.front().kappa1 << ", kappa2 = " << tests.front().kappa2
            << "\n";
  std::cout << std::left << std::setw(30) << "  H0" << std::setw(12) << "statistic"
            << std::setw(6) << "dof" << "p-value\n";
  for (const auto& t : tests) {
    std::ostringstream h0;
    if (t.s == 0 && t.r == sol.lambda.size())
      h0 << "all eigenvalues equal";
    else
      h0 << "lambda_" << (t.s + 1) << " = lambda_" << (t.s + t.r);
    std::cout << "  " << std::left << std::setw(28) << h0.str() << std::setw(12) << t.statistic
              << std::setw(6) << t.dof << t.p_value << "\n";
  }
}

int dispatch(int argc, char** argv) {
  CLI::App app{"hsvar: identification and robust-Bayes inference for "
               "heteroskedastic structural VARs"};
  app.require_subcommand(1);

  std::string config_path, seed_override, out_override;

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a two-regime sample and write a CSV");
  int sim_n = 3, sim_t = 500, sim_tb = 250, sim_lags = 1;
  std::uint64_t sim_seed = 1;
  double sim_rho = 0.4;
  std::vector<double> sim_lambda;
  std::string sim_out = "simulated.csv";
  sim->add_option("--n", sim_n, "number of variables");
  sim->add_option("--T", sim_t, "sample size");
  sim->add_option("--Tb", sim_tb, "last period of the first regime");
  sim->add_option("--lags", sim_lags, "lag order");
  sim->add_option("--rho", sim_rho, "diagonal persistence of each lag block");
  sim->add_option("--lambda", sim_lambda, "second-regime variance shifts")->expected(-1);
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out", sim_out, "output CSV path");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value configuration file")->required();
    cmd->add_option("--seed", seed_override, "seed override");
    cmd->add_option("--out", out_override, "output directory override");
  };
  auto* est = app.add_subcommand("estimate", "reduced-form estimation");
  add_common(est);
  auto* het = app.add_subcommand("test-het", "eigenvalues and identification tests");
  add_common(het);
  auto* ident = app.add_subcommand("identify", "eigen identification and status");
  add_common(ident);
  auto* bounds = app.add_subcommand("bounds", "robust bounds for the shock of interest");
  add_common(bounds);
  auto* runcmd = app.add_subcommand("run", "full pipeline with report and band files");
  add_common(runcmd);

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    SimulationTruth truth;
    RngStream rng(sim_seed + 17);
    truth.impact = Matrix::Identity(sim_n, sim_n);
    for (int i = 0; i < sim_n; ++i)
      for (int j = 0; j < i; ++j) truth.impact(i, j) = 0.4 * rng.gaussian();
    truth.lambda = Vector::Ones(sim_n);
    for (size_t i = 0; i < sim_lambda.size() && i < static_cast<size_t>(sim_n); ++i)
      truth.lambda(static_cast<Eigen::Index>(i)) = sim_lambda[i];
    truth.B = Matrix::Zero(sim_n, sim_n * sim_lags + 1);
    truth.B.middleCols(1, sim_n) = sim_rho * Matrix::Identity(sim_n, sim_n);
    const Dataset data = simulate(truth, sim_t, sim_tb, sim_seed);
    CsvTable table;
    table.header = data.variable_names;
    table.has_dates = false;
    Matrix all(sim_n, data.presample.cols() + data.observations.cols());
    all << data.presample, data.observations;
    table.values = all.transpose();
    write_csv(sim_out, table);
    std::cout << "wrote " << sim_out << " (" << table.values.rows() << " rows, break at row "
              << (data.presample.cols() + sim_tb) << ")\n";
    return 0;
  }

  const RunConfig cfg = load_config(config_path, seed_override, out_override);

  if (est->parsed()) {
    const Dataset data = load_dataset(cfg);
    const ReducedForm rf = estimate_point(cfg, data);
    std::cout << "estimator: " << cfg.estimator << "  (T = " << data.n_obs()
              << ", T_B = " << data.break_index << ", stable = " << (rf.stable ? "yes" : "no")
              << ")\n";
    print_matrix("B", rf.B);
    print_matrix("Omega1", rf.omega1);
    print_matrix("Omega2", rf.omega2);
    std::cout << "log-likelihood = " << log_likelihood(data, rf) << "\n";
    return 0;
  }
  if (het->parsed()) {
    const Dataset data = load_dataset(cfg);
    print_eigen_and_tests(cfg, data);
    return 0;
  }
  if (ident->parsed()) {
    const Dataset data = load_dataset(cfg);
    const ReducedForm rf = estimate_point(cfg, data);
    const NormalizationRule norm = cfg.normalization();
    RestrictionSpec rspec = resolve_restrictions(cfg, static_cast<int>(data.n_vars()));
    EigenIdentification sol = solve_eigen(rf, norm);
    std::cout << "lambda:";
    for (Eigen::Index i = 0; i < sol.lambda.size(); ++i) std::cout << " " << sol.lambda(i);
    std::cout << "\n";
    print_matrix("Q", sol.Q);
    print_matrix("C = A0^{-1}", sol.C);
    const VmaCoefficients vma = vma_coefficients(rf, std::max(cfg.horizons, rspec.max_horizon()));
    EigenIdentification pooled = pool_eigenvalues(sol, rspec.partition);
    const RestrictionProgram prog = order_variables(compile(rspec, rf, vma, norm));
    const IdStatus st = classify(prog, &pooled);
    std::cout << "status: ";
    switch (st.tag) {
      case IdStatus::Tag::point_identified: std::cout << "point identified\n"; break;
      case IdStatus::Tag::set_identified: std::cout << "set identified\n"; break;
      case IdStatus::Tag::over_restricted: std::cout << "over-restricted\n"; break;
    }
    if (st.sign_feasible.has_value())
      std::cout << "sign restrictions strictly feasible: " << (*st.sign_feasible ? "yes" : "no")
                << "\n";
    if (st.tag == IdStatus::Tag::point_identified) {
      const StructuralParams params = exact_point_identify(rf, pooled, prog, norm);
      print_matrix("A0", params.A0);
    }
    return 0;
  }
  if (bounds->parsed()) {
    const Dataset data = load_dataset(cfg);
    const int n = static_cast<int>(data.n_vars());
    RestrictionSpec rspec = resolve_restrictions(cfg, n);
    std::vector<EtaFunctional> targets;
    for (int g = 0; g < n; ++g)
      for (int h = 0; h <= cfg.horizons; ++h)
        targets.push_back({EtaFunctional::Target::ir_h, g, h});
    AlgoConfig ac;
    ac.M = cfg.M;
    ac.L = cfg.L;
    ac.K = cfg.K;
    ac.multistarts = cfg.multistarts;
    ac.eta_grid = cfg.eta_grid;
    ac.alpha = cfg.alpha;
    ac.seed = cfg.seed;
    ac.stochastic_step5 = cfg.stochastic_step5;
    ac.threads = detail::env_threads();
    const PriorSpec prior = prior_from_config(cfg, n, data.n_regressors());
    const BoundsResult res = run_algorithm1(data, prior, rspec, targets, ac,
                                            cfg.normalization(), cfg.burn_in);
    std::cout << "shock " << (res.shock + 1) << ": accepted " << res.accepted << " of "
              << res.attempted << " draws (emptiness rate " << res.emptiness_rate << ")\n";
    std::cout << "variable,horizon,pmb_lo,pmb_hi,rcr_lo,rcr_hi,informativeness\n";
    for (const auto& cell : res.cells)
      std::cout << (cell.target.g + 1) << "," << cell.target.h << "," << cell.pmb_lo << ","
                << cell.pmb_hi << "," << cell.rcr.lo << "," << cell.rcr.hi << ","
                << cell.informativeness << "\n";
    return 0;
  }
  // run
  const Report report = run(cfg);
  std::cout << "report written to " << cfg.out_dir << " (config hash "
            << report.config_hash_hex << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const hsvar::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const hsvar::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const hsvar::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
