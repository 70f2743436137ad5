#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/restrictions.hpp"

namespace hsvar {

// Built-in restriction presets, addressable by name instead of a file path.
// `table2-oil` encodes the three-variable oil-market sign pattern: the
// distinct eigenvalue (position 1) is left unrestricted, the pooled block
// holds a supply-disruption shock (activity falls on impact, the oil price
// rises for twelve months) and an aggregate-demand shock (production and
// price rise on impact). Own-sign cells are handled by the sign
// normalization, not by sign rows.
inline const char* builtin_preset(const std::string& name) {
  if (name == "table2-oil") {
    return "pool 2..3\n"
           "interest 2\n"
           "# supply disruption at position 2\n"
           "sign IR 0 2 2 -\n"
           "sign IR 0..11 3 2 +\n"
           "# aggregate demand at position 3\n"
           "sign IR 0 1 3 +\n"
           "sign IR 0 3 3 +\n";
  }
  return nullptr;
}

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

inline bool parse_int_token(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t i = 0;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  out = std::stoi(s);
  return true;
}

// "a..b" or a single integer
inline bool parse_range(const std::string& s, int& lo, int& hi) {
  const auto pos = s.find("..");
  if (pos == std::string::npos) {
    if (!parse_int_token(s, lo)) return false;
    hi = lo;
    return true;
  }
  return parse_int_token(s.substr(0, pos), lo) && parse_int_token(s.substr(pos + 2), hi);
}

}  // namespace detail

// Line-oriented restriction format (1-based indices; shock indices refer to
// eigen positions under the descending eigenvalue ordering):
//   zero A0inv i j        zero A0 i j         zero A_l lag i j
//   zero CIRinf i j       zero IR h i j
//   sign IR h i j +|-     sign IR h1..h2 i j +|-
//   interest j            pool a..b
// '#' starts a comment.
inline RestrictionSpec parse_restrictions_text(const std::string& text) {
  RestrictionSpec spec;
  std::vector<std::pair<int, int>> pools;  // 1-based inclusive position ranges
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int max_index = 0;
  auto fail = [&](const std::string& what) {
    throw SyntaxError("restrictions: line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    std::string canon;
    for (const auto& t : toks) canon += t + " ";
    if ((toks[0] == "zero" || toks[0] == "sign") && !seen.insert(canon).second)
      throw DuplicateRestriction("restrictions: line " + std::to_string(line_no) +
                                 ": duplicate restriction");
    if (toks[0] == "zero") {
      if (toks.size() < 4) fail("zero needs a target and indices");
      ZeroRestriction z;
      int i = 0, j = 0;
      if (toks[1] == "A0inv" || toks[1] == "A0" || toks[1] == "CIRinf") {
        if (toks.size() != 4) fail("expected 'zero " + toks[1] + " i j'");
        if (!detail::parse_int_token(toks[2], i) || !detail::parse_int_token(toks[3], j))
          fail("bad indices");
        z.target = toks[1] == "A0inv"   ? ZeroRestriction::Target::a0_inv
                   : toks[1] == "A0"    ? ZeroRestriction::Target::a0
                                        : ZeroRestriction::Target::cir_inf;
      } else if (toks[1] == "A_l") {
        if (toks.size() != 5) fail("expected 'zero A_l lag i j'");
        if (!detail::parse_int_token(toks[2], z.lag_or_horizon) ||
            !detail::parse_int_token(toks[3], i) || !detail::parse_int_token(toks[4], j))
          fail("bad indices");
        z.target = ZeroRestriction::Target::a_lag;
      } else if (toks[1] == "IR") {
        if (toks.size() != 5) fail("expected 'zero IR h i j'");
        if (!detail::parse_int_token(toks[2], z.lag_or_horizon) ||
            !detail::parse_int_token(toks[3], i) || !detail::parse_int_token(toks[4], j))
          fail("bad indices");
        z.target = ZeroRestriction::Target::ir_h;
      } else {
        fail("unknown zero target '" + toks[1] + "'");
      }
      if (i < 1 || j < 1) fail("indices are 1-based");
      z.row_i = i - 1;
      z.col_j = j - 1;
      max_index = std::max({max_index, i, j});
      spec.zeros.push_back(z);
    } else if (toks[0] == "sign") {
      if (toks.size() != 6 || toks[1] != "IR") fail("expected 'sign IR h i j +|-'");
      SignRestriction s;
      int h_lo = 0, h_hi = 0, i = 0, j = 0;
      if (!detail::parse_range(toks[2], h_lo, h_hi)) fail("bad horizon");
      if (!detail::parse_int_token(toks[3], i) || !detail::parse_int_token(toks[4], j))
        fail("bad indices");
      if (toks[5] == "+")
        s.direction = +1;
      else if (toks[5] == "-")
        s.direction = -1;
      else
        fail("direction must be + or -");
      if (i < 1 || j < 1) fail("indices are 1-based");
      s.h_lo = h_lo;
      s.h_hi = h_hi;
      s.var_i = i - 1;
      s.shock_j = j - 1;
      max_index = std::max({max_index, i, j});
      spec.signs.push_back(s);
    } else if (toks[0] == "interest") {
      int j = 0;
      if (toks.size() != 2 || !detail::parse_int_token(toks[1], j) || j < 1)
        fail("expected 'interest j'");
      spec.shock_of_interest = j - 1;
      max_index = std::max(max_index, j);
    } else if (toks[0] == "pool") {
      int lo = 0, hi = 0;
      if (toks.size() != 2 || !detail::parse_range(toks[1], lo, hi) || lo < 1 || hi < lo)
        fail("expected 'pool a..b'");
      pools.emplace_back(lo, hi);
      max_index = std::max(max_index, hi);
    } else {
      fail("unknown directive '" + toks[0] + "'");
    }
  }
  (void)max_index;
  if (!pools.empty()) {
    // pools are declared over contiguous descending-eigenvalue positions
    std::sort(pools.begin(), pools.end());
    for (size_t k = 1; k < pools.size(); ++k)
      if (pools[k].first <= pools[k - 1].second)
        throw SyntaxError("restrictions: overlapping pool ranges");
    spec.partition.block_sizes.clear();
    int next = 1;
    for (const auto& [lo, hi] : pools) {
      for (; next < lo; ++next) spec.partition.block_sizes.push_back(1);
      spec.partition.block_sizes.push_back(hi - lo + 1);
      next = hi + 1;
    }
    // trailing singletons are appended when the dimension is known
  }
  return spec;
}

// Pad a pooled partition with trailing singleton blocks once n is known.
inline void finalize_partition(RestrictionSpec& spec, int n) {
  if (spec.partition.block_sizes.empty()) {
    spec.partition = Partition::singletons(n);
    return;
  }
  int total = spec.partition.total();
  if (total > n) throw InvalidPartition("restrictions: pool range beyond dimension");
  while (total < n) {
    spec.partition.block_sizes.push_back(1);
    ++total;
  }
}

inline RestrictionSpec parse_restrictions(const std::string& path_or_preset) {
  if (const char* preset = builtin_preset(path_or_preset))
    return parse_restrictions_text(preset);
  std::ifstream in(path_or_preset);
  if (!in) throw SyntaxError("restrictions: cannot open " + path_or_preset);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_restrictions_text(ss.str());
}

}  // namespace hsvar
