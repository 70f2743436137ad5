#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "hsvar/errors.hpp"
#include "hsvar/ident.hpp"

namespace hsvar {

// Flat key=value run configuration. Unknown keys are rejected so typos in
// batch scripts fail loudly.
struct RunConfig {
  std::string data_path;
  std::string break_spec;
  int lags = 1;
  std::string estimator = "gibbs";  // ols | gls | ml | gibbs
  int horizons = 24;
  std::string restrictions;  // file path or preset name, may be empty
  std::string pool;          // e.g. "2..3" or "2..3,4..5"; overrides the file
  int interest = 0;          // 1-based eigen position; 0 = from file/default
  std::string norm = "diagA0";  // diagA0 | diagC
  double alpha = 0.68;
  int M = 1000;
  int L = 3000;
  int K = 10000;
  int multistarts = 5;
  int eta_grid = 400;
  std::uint64_t seed = 1;
  int burn_in = 1000;
  int thinning = 1;
  bool stochastic_step5 = false;
  double prior_v_scale = 1e4;
  double prior_s_scale = 0.0;  // 0 = diffuse default (identity prior mean)
  int prior_d = 0;             // 0 = n + 2
  std::string out_dir = "hsvar_out";

  NormalizationRule normalization() const {
    NormalizationRule rule;
    if (norm == "diagC")
      rule.sign_rule = NormalizationRule::Sign::diag_c_nonneg;
    else if (norm != "diagA0")
      throw ValidationError("config: norm must be diagA0 or diagC");
    return rule;
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      throw ValidationError("config: line " + std::to_string(line_no) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "data") cfg.data_path = val;
      else if (key == "break") cfg.break_spec = val;
      else if (key == "lags") cfg.lags = std::stoi(val);
      else if (key == "estimator") cfg.estimator = val;
      else if (key == "horizons") cfg.horizons = std::stoi(val);
      else if (key == "restrictions") cfg.restrictions = val;
      else if (key == "pool") cfg.pool = val;
      else if (key == "interest") cfg.interest = std::stoi(val);
      else if (key == "norm") cfg.norm = val;
      else if (key == "alpha") cfg.alpha = std::stod(val);
      else if (key == "M") cfg.M = std::stoi(val);
      else if (key == "L") cfg.L = std::stoi(val);
      else if (key == "K") cfg.K = std::stoi(val);
      else if (key == "multistarts") cfg.multistarts = std::stoi(val);
      else if (key == "eta_grid") cfg.eta_grid = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "burn_in") cfg.burn_in = std::stoi(val);
      else if (key == "thinning") cfg.thinning = std::stoi(val);
      else if (key == "stochastic_step5") cfg.stochastic_step5 = (val == "1" || val == "true");
      else if (key == "prior_v_scale") cfg.prior_v_scale = std::stod(val);
      else if (key == "prior_s_scale") cfg.prior_s_scale = std::stod(val);
      else if (key == "prior_d") cfg.prior_d = std::stoi(val);
      else if (key == "out") cfg.out_dir = val;
      else throw ValidationError("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ValidationError("config: line " + std::to_string(line_no) + ": bad value for '" +
                            key + "'");
    }
  }
  if (cfg.estimator != "ols" && cfg.estimator != "gls" && cfg.estimator != "ml" &&
      cfg.estimator != "gibbs")
    throw ValidationError("config: estimator must be ols, gls, ml or gibbs");
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// Stable hash of the effective configuration, embedded in reports so a run
// can be reproduced from its provenance block.
inline std::string config_hash(const RunConfig& c) {
  std::ostringstream s;
  s << "alpha=" << c.alpha << "\nbreak=" << c.break_spec << "\nburn_in=" << c.burn_in
    << "\ndata=" << c.data_path << "\nestimator=" << c.estimator << "\neta_grid=" << c.eta_grid
    << "\nhorizons=" << c.horizons << "\ninterest=" << c.interest << "\nK=" << c.K
    << "\nL=" << c.L << "\nlags=" << c.lags << "\nM=" << c.M
    << "\nmultistarts=" << c.multistarts << "\nnorm=" << c.norm << "\npool=" << c.pool
    << "\nprior_d=" << c.prior_d << "\nprior_s_scale=" << c.prior_s_scale
    << "\nprior_v_scale=" << c.prior_v_scale << "\nrestrictions=" << c.restrictions
    << "\nseed=" << c.seed << "\nstochastic_step5=" << c.stochastic_step5
    << "\nthinning=" << c.thinning << "\n";
  std::ostringstream h;
  h << std::hex << detail::fnv1a(s.str());
  return h.str();
}

}  // namespace hsvar
