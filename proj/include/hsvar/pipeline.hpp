#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "hsvar/bounds.hpp"
#include "hsvar/config.hpp"
#include "hsvar/csv.hpp"
#include "hsvar/gibbs.hpp"
#include "hsvar/het_test.hpp"
#include "hsvar/ident.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/restriction_parser.hpp"
#include "hsvar/restrictions.hpp"
#include "hsvar/version.hpp"

namespace hsvar {

struct BandRow {
  double mean = 0, hpd_lo = 0, hpd_hi = 0;
  double pmb_lo = 0, pmb_hi = 0, rcr_lo = 0, rcr_hi = 0;
  double informativeness = 0;
};

struct ShockBands {
  int shock = 0;             // 0-based eigen position
  bool has_bounds = false;   // robust-bounds columns present
  std::vector<std::vector<BandRow>> per_variable;  // [g][h]
  double emptiness_rate = 0;
};

struct Report {
  Vector eigenvalues;
  std::vector<HetTestResult> het_tests;
  IdStatus id_status;
  bool has_status = false;
  Partition partition;
  std::vector<ShockBands> bands;
  std::string config_hash_hex;
  std::uint64_t seed = 0;
  std::string version = HSVAR_VERSION;
};

namespace detail {

inline int env_threads() {
  if (const char* s = std::getenv("HSVAR_THREADS")) {
    const int t = std::atoi(s);
    if (t >= 1) return t;
  }
  return 1;
}

inline Partition parse_pool_option(const std::string& pools, int n) {
  std::string text;
  std::istringstream ss(pools);
  std::string item;
  while (std::getline(ss, item, ',')) text += "pool " + item + "\n";
  RestrictionSpec parsed = parse_restrictions_text(text);
  finalize_partition(parsed, n);
  return parsed.partition;
}

}  // namespace detail

inline PriorSpec prior_from_config(const RunConfig& cfg, int n, int m) {
  PriorSpec prior = default_diffuse_prior(n, m);
  prior.v_phi = cfg.prior_v_scale * Matrix::Identity(n * m, n * m);
  if (cfg.prior_d > 0) {
    if (cfg.prior_d <= n + 1)
      throw ValidationError("config: prior_d must exceed n + 1 for the prior mean to exist");
    prior.d1 = prior.d2 = cfg.prior_d;
    prior.s1 = prior.s2 = static_cast<double>(cfg.prior_d - n - 1) * Matrix::Identity(n, n);
  }
  if (cfg.prior_s_scale > 0.0) {
    prior.s1 = cfg.prior_s_scale * Matrix::Identity(n, n);
    prior.s2 = cfg.prior_s_scale * Matrix::Identity(n, n);
  }
  return prior;
}

inline ReducedForm estimate_point(const RunConfig& cfg, const Dataset& data) {
  if (cfg.estimator == "ols") return ols_estimate(data);
  if (cfg.estimator == "gls") return gls_estimate(data);
  if (cfg.estimator == "ml") return ml_estimate(data);
  // gibbs: posterior-mean reduced form
  const int n = static_cast<int>(data.n_vars());
  const int m = data.n_regressors();
  GibbsConfig gc;
  gc.burn_in = cfg.burn_in;
  gc.draws = std::min(cfg.M, 500);
  gc.thinning = cfg.thinning;
  gc.seed = cfg.seed;
  const PosteriorDraws post = run_gibbs(data, prior_from_config(cfg, n, m), gc);
  ReducedForm mean = post.draws.front();
  mean.B.setZero();
  mean.omega1.setZero();
  mean.omega2.setZero();
  for (const auto& d : post.draws) {
    mean.B += d.B;
    mean.omega1 += d.omega1;
    mean.omega2 += d.omega2;
  }
  const double k = static_cast<double>(post.draws.size());
  mean.B /= k;
  mean.omega1 /= k;
  mean.omega2 /= k;
  mean.stable = is_stable(mean);
  return mean;
}

// Fill the full restriction spec from the config: file or preset, pool and
// interest overrides, partition padded to dimension n.
inline RestrictionSpec resolve_restrictions(const RunConfig& cfg, int n) {
  RestrictionSpec rspec;
  if (!cfg.restrictions.empty()) rspec = parse_restrictions(cfg.restrictions);
  if (!cfg.pool.empty()) rspec.partition = detail::parse_pool_option(cfg.pool, n);
  finalize_partition(rspec, n);
  if (cfg.interest > 0) {
    if (cfg.interest > n) throw ValidationError("config: interest shock out of range");
    rspec.shock_of_interest = cfg.interest - 1;
  }
  if (rspec.shock_of_interest < 0 || rspec.shock_of_interest >= n)
    throw ValidationError("restrictions: shock of interest out of range");
  return rspec;
}

namespace detail {

// Point-identified per-draw responses of shock j from its eigenvector
// column; summarized by the posterior mean and HPD band.
inline std::vector<std::vector<BandRow>> point_bands_for_shock(
    const PosteriorDraws& post, const RestrictionSpec& rspec, const NormalizationRule& norm,
    int shock, int horizons, double alpha, bool pooled_exact) {
  const int n = static_cast<int>(post.draws.front().n_vars());
  std::vector<std::vector<std::vector<double>>> samples(
      static_cast<size_t>(n),
      std::vector<std::vector<double>>(static_cast<size_t>(horizons + 1)));
  for (const auto& rf : post.draws) {
    EigenIdentification sol = solve_eigen(rf, norm);
    Vector qcol;
    const VmaCoefficients vma = vma_coefficients(rf, horizons);
    if (pooled_exact) {
      sol = pool_eigenvalues(std::move(sol), rspec.partition);
      const RestrictionProgram prog = order_variables(compile(rspec, rf, vma, norm));
      qcol = exact_point_identify_q(sol, prog).col(shock);
    } else {
      qcol = sol.Q.col(shock);
    }
    for (int h = 0; h <= horizons; ++h) {
      const Vector resp = vma.C[h] * (sol.omega1_tr * qcol);
      for (int g = 0; g < n; ++g)
        samples[static_cast<size_t>(g)][static_cast<size_t>(h)].push_back(resp(g));
    }
  }
  std::vector<std::vector<BandRow>> rows(static_cast<size_t>(n));
  for (int g = 0; g < n; ++g) {
    rows[static_cast<size_t>(g)].resize(static_cast<size_t>(horizons + 1));
    for (int h = 0; h <= horizons; ++h) {
      auto& cell = samples[static_cast<size_t>(g)][static_cast<size_t>(h)];
      BandRow row;
      double s = 0;
      for (double v : cell) s += v;
      row.mean = s / cell.size();
      auto hpd = hpd_region(cell, alpha);
      row.hpd_lo = hpd.first;
      row.hpd_hi = hpd.second;
      rows[static_cast<size_t>(g)][static_cast<size_t>(h)] = row;
    }
  }
  return rows;
}

}  // namespace detail

// Full batch pipeline: estimate, solve the eigen problem, run the
// identification-test cascade, then either standard point-identified
// inference or the robust-bounds algorithm for the set-identified shocks.
// Returns the report; artifact files are written when out_dir is non-empty.
inline Report run_pipeline(const RunConfig& cfg, const Dataset& data_in) {
  Dataset data = data_in;
  data.validate();
  const int n = static_cast<int>(data.n_vars());
  const int m = data.n_regressors();
  const NormalizationRule norm = cfg.normalization();
  RestrictionSpec rspec = resolve_restrictions(cfg, n);

  Report report;
  report.seed = cfg.seed;
  report.config_hash_hex = config_hash(cfg);
  report.partition = rspec.partition;

  const ReducedForm point_rf = estimate_point(cfg, data);
  EigenIdentification sol = solve_eigen(point_rf, norm);
  report.eigenvalues = sol.lambda;
  report.het_tests = test_suite(sol, data, point_rf);

  const int max_h = std::max(cfg.horizons, rspec.max_horizon());
  const VmaCoefficients vma = vma_coefficients(point_rf, max_h);
  EigenIdentification pooled = pool_eigenvalues(sol, rspec.partition);
  RestrictionProgram prog = order_variables(compile(rspec, point_rf, vma, norm));
  report.id_status = classify(prog, &pooled);
  report.has_status = true;

  if (report.id_status.tag == IdStatus::Tag::over_restricted)
    throw NumericalError(
        "pipeline: restriction pattern over-restricts a block (more zero rows than the "
        "identification staircase allows)");

  const PriorSpec prior = prior_from_config(cfg, n, m);
  GibbsConfig gc;
  gc.burn_in = cfg.burn_in;
  gc.draws = cfg.M;
  gc.thinning = cfg.thinning;
  gc.seed = cfg.seed;
  const PosteriorDraws post = run_gibbs(data, prior, gc);

  bool any_pooled = false;
  for (int s : rspec.partition.block_sizes)
    if (s > 1) any_pooled = true;

  for (int j = 0; j < n; ++j) {
    ShockBands bands;
    bands.shock = j;
    const int block = rspec.partition.block_of(j);
    const bool in_pooled_block = rspec.partition.block_sizes[block] > 1;
    if (!any_pooled || !in_pooled_block) {
      // eigenvalue without declared multiplicity: standard inference
      bands.has_bounds = false;
      bands.per_variable =
          detail::point_bands_for_shock(post, rspec, norm, j, cfg.horizons, cfg.alpha, false);
    } else if (report.id_status.tag == IdStatus::Tag::point_identified) {
      // zero restrictions pin the pooled block exactly; per-draw responses
      bands.has_bounds = false;
      bands.per_variable =
          detail::point_bands_for_shock(post, rspec, norm, j, cfg.horizons, cfg.alpha, true);
    } else {
      // set identified: robust-Bayes bounds for this shock
      RestrictionSpec shock_spec = rspec;
      shock_spec.shock_of_interest = j;
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
      const BoundsResult res =
          run_algorithm1(data, prior, shock_spec, targets, ac, norm, cfg.burn_in);
      bands.has_bounds = true;
      bands.emptiness_rate = res.emptiness_rate;
      bands.per_variable.assign(static_cast<size_t>(n), {});
      for (int g = 0; g < n; ++g)
        bands.per_variable[static_cast<size_t>(g)].resize(static_cast<size_t>(cfg.horizons + 1));
      for (size_t c = 0; c < res.cells.size(); ++c) {
        const auto& cell = res.cells[c];
        BandRow row;
        double s = 0;
        for (double v : cell.retained) s += v;
        row.mean = s / cell.retained.size();
        row.hpd_lo = cell.hpd_lo;
        row.hpd_hi = cell.hpd_hi;
        row.pmb_lo = cell.pmb_lo;
        row.pmb_hi = cell.pmb_hi;
        row.rcr_lo = cell.rcr.lo;
        row.rcr_hi = cell.rcr.hi;
        row.informativeness = cell.informativeness;
        if (!(row.pmb_lo <= row.pmb_hi))
          throw NumericalError("pipeline: posterior-mean bounds out of order");
        bands.per_variable[static_cast<size_t>(cell.target.g)]
                          [static_cast<size_t>(cell.target.h)] = row;
      }
    }
    report.bands.push_back(std::move(bands));
  }
  return report;
}

inline void write_report_files(const Report& report, const RunConfig& cfg,
                               const std::vector<std::string>& variable_names) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const int n = static_cast<int>(report.eigenvalues.size());

  for (const auto& bands : report.bands) {
    for (int g = 0; g < n; ++g) {
      std::ostringstream name;
      name << cfg.out_dir << "/irf_v" << (g + 1) << "_s" << (bands.shock + 1) << ".csv";
      std::ofstream out(name.str());
      out << std::setprecision(17);
      if (bands.has_bounds) {
        out << "horizon,mean,hpd_lo,hpd_hi,pmb_lo,pmb_hi,rcr_lo,rcr_hi\n";
        for (size_t h = 0; h < bands.per_variable[static_cast<size_t>(g)].size(); ++h) {
          const auto& r = bands.per_variable[static_cast<size_t>(g)][h];
          out << h << "," << r.mean << "," << r.hpd_lo << "," << r.hpd_hi << "," << r.pmb_lo
              << "," << r.pmb_hi << "," << r.rcr_lo << "," << r.rcr_hi << "\n";
        }
      } else {
        out << "horizon,mean,hpd_lo,hpd_hi\n";
        for (size_t h = 0; h < bands.per_variable[static_cast<size_t>(g)].size(); ++h) {
          const auto& r = bands.per_variable[static_cast<size_t>(g)][h];
          out << h << "," << r.mean << "," << r.hpd_lo << "," << r.hpd_hi << "\n";
        }
      }
    }
  }

  std::ofstream rep(cfg.out_dir + "/report.txt");
  rep << std::setprecision(6);
  rep << "hsvar " << report.version << " run report\n";
  rep << "=============================\n\n";
  rep << "Estimated eigenvalues\n";
  for (int i = 0; i < n; ++i)
    rep << "  lambda_" << (i + 1) << " = " << report.eigenvalues(i) << "\n";
  rep << "\nIdentification-through-heteroskedasticity tests\n";
  rep << "  " << std::left << std::setw(26) << "H0" << std::setw(12) << "statistic"
      << std::setw(6) << "dof" << "p-value\n";
  for (const auto& t : report.het_tests) {
    std::ostringstream h0;
    if (t.r == n && t.s == 0)
      h0 << "all eigenvalues equal";
    else
      h0 << "lambda_" << (t.s + 1) << " = lambda_" << (t.s + t.r);
    rep << "  " << std::left << std::setw(26) << h0.str() << std::setw(12) << t.statistic
        << std::setw(6) << t.dof << t.p_value << "\n";
  }
  rep << std::right;
  rep << "\nDeclared partition:";
  for (int s : report.partition.block_sizes) rep << " " << s;
  rep << "\nIdentification status: ";
  switch (report.id_status.tag) {
    case IdStatus::Tag::point_identified: rep << "point identified\n"; break;
    case IdStatus::Tag::set_identified: rep << "set identified\n"; break;
    case IdStatus::Tag::over_restricted: rep << "over-restricted\n"; break;
  }
  for (const auto& bands : report.bands) {
    if (!bands.has_bounds) continue;
    rep << "\nShock " << (bands.shock + 1) << ": emptiness rate " << bands.emptiness_rate
        << "; prior informativeness by horizon (min..max across variables)\n";
    const size_t hmax = bands.per_variable.empty() ? 0 : bands.per_variable[0].size();
    for (size_t h = 0; h < hmax; ++h) {
      double lo = 1.0, hi = 0.0;
      for (const auto& pv : bands.per_variable) {
        lo = std::min(lo, pv[h].informativeness);
        hi = std::max(hi, pv[h].informativeness);
      }
      rep << "  h=" << h << ": " << lo << " .. " << hi << "\n";
    }
  }
  rep << "\nProvenance\n";
  rep << "  seed        = " << report.seed << "\n";
  rep << "  version     = " << report.version << "\n";
  rep << "  config hash = " << report.config_hash_hex << "\n";
  if (!variable_names.empty()) {
    rep << "  variables   =";
    for (const auto& v : variable_names) rep << " " << v;
    rep << "\n";
  }
}

inline Report run(const RunConfig& cfg) {
  const Dataset data = ingest_csv(cfg.data_path, cfg.lags, cfg.break_spec);
  Report report = run_pipeline(cfg, data);
  if (!cfg.out_dir.empty()) write_report_files(report, cfg, data.variable_names);
  return report;
}

}  // namespace hsvar
