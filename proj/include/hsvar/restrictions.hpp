#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/ident.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/rng.hpp"

namespace hsvar {

// Zero restriction on a structural object. Row/column indices are 0-based;
// `col_j` refers to an eigen position (column of Q under the descending
// ordering). `lag_or_horizon` is the lag for a_lag targets and the horizon
// for ir_h targets.
struct ZeroRestriction {
  enum class Target { a0_inv, a0, a_lag, cir_inf, ir_h };
  Target target = Target::a0_inv;
  int lag_or_horizon = 0;
  int row_i = 0;
  int col_j = 0;
};

struct SignRestriction {
  int var_i = 0;
  int shock_j = 0;
  int h_lo = 0, h_hi = 0;  // inclusive horizon range
  int direction = +1;
};

struct RestrictionSpec {
  std::vector<ZeroRestriction> zeros;
  std::vector<SignRestriction> signs;
  int shock_of_interest = 0;  // eigen position, 0-based
  Partition partition;        // empty => all singletons

  int max_horizon() const {
    int h = 0;
    for (const auto& z : zeros)
      if (z.target == ZeroRestriction::Target::ir_h) h = std::max(h, z.lag_or_horizon);
    for (const auto& s : signs) h = std::max(h, s.h_hi);
    return h;
  }
};

// Compiled restriction system: one F_j (zero rows) and S_j (sign rows)
// matrix per eigen position, the per-position sign-normalization rows, and
// the within-block build order.
struct RestrictionProgram {
  std::vector<Matrix> F;  // f_j x n each
  std::vector<Matrix> S;  // s_j x n each
  Matrix norm_rows;       // n x n, row k normalizes the column at position k
  Partition partition;
  int j_star = 0;
  std::vector<int> build_order;  // slot -> eigen position
  bool ordered = false;

  int n() const { return static_cast<int>(norm_rows.rows()); }
  int zero_count(int position) const { return static_cast<int>(F[position].rows()); }
  int total_zeros() const {
    int f = 0;
    for (const auto& fj : F) f += static_cast<int>(fj.rows());
    return f;
  }
};

// Compile the declared restrictions into rows acting on the columns of Q.
// Every row depends on the reduced form (and pre-computed VMA terms) only.
inline RestrictionProgram compile(const RestrictionSpec& spec, const ReducedForm& rf,
                                  const VmaCoefficients& vma,
                                  const NormalizationRule& norm = {}) {
  const int n = static_cast<int>(rf.n_vars());
  const Matrix l1 = cholesky_lower(rf.omega1);
  RestrictionProgram prog;
  prog.F.assign(n, Matrix(0, n));
  prog.S.assign(n, Matrix(0, n));
  prog.partition = spec.partition.block_sizes.empty() ? Partition::singletons(n) : spec.partition;
  prog.partition.validate(n);
  prog.j_star = spec.shock_of_interest;
  if (prog.j_star < 0 || prog.j_star >= n)
    throw IndexOutOfBounds("compile: shock of interest out of range");

  auto check_index = [&](int i, int j) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw IndexOutOfBounds("compile: restriction index out of range");
  };
  auto append_row = [&](Matrix& m, const Vector& row) {
    m.conservativeResize(m.rows() + 1, n);
    m.row(m.rows() - 1) = row.transpose();
  };
  auto solve_l1 = [&](const Vector& v) -> Vector {
    return l1.triangularView<Eigen::Lower>().solve(v);
  };

  const Matrix lag_sum = rf.lag_sum();
  const Matrix a_long = Matrix::Identity(n, n) - lag_sum;

  for (const auto& z : spec.zeros) {
    check_index(z.row_i, z.col_j);
    Vector row(n);
    switch (z.target) {
      case ZeroRestriction::Target::a0_inv:
        // (i,j) of A0^{-1} = (e_i' Omega1tr) q_j
        row = l1.row(z.row_i).transpose();
        append_row(prog.F[z.col_j], row);
        break;
      case ZeroRestriction::Target::a0:
        // (i,j) of A0 = (Omega1tr^{-1} e_j)' q_i
        row = solve_l1(Vector::Unit(n, z.col_j));
        append_row(prog.F[z.row_i], row);
        break;
      case ZeroRestriction::Target::a_lag: {
        if (z.lag_or_horizon < 1 || z.lag_or_horizon > rf.lag_order())
          throw IndexOutOfBounds("compile: lag out of range");
        // (i,j) of A_l = (Omega1tr^{-1} B_l e_j)' q_i
        row = solve_l1(rf.lag_block(z.lag_or_horizon).col(z.col_j));
        append_row(prog.F[z.row_i], row);
        break;
      }
      case ZeroRestriction::Target::cir_inf: {
        // (i,j) of CIR^inf = [e_i' (I - sum B)^{-1} Omega1tr] q_j
        const Vector lhs = a_long.transpose().partialPivLu().solve(Vector::Unit(n, z.row_i));
        row = l1.transpose() * lhs;
        append_row(prog.F[z.col_j], row);
        break;
      }
      case ZeroRestriction::Target::ir_h: {
        if (z.lag_or_horizon < 0 || z.lag_or_horizon > vma.horizons)
          throw HorizonExceeded("compile: zero-restriction horizon beyond computed VMA");
        row = (vma.C[z.lag_or_horizon] * l1).row(z.row_i).transpose();
        append_row(prog.F[z.col_j], row);
        break;
      }
    }
  }

  for (const auto& s : spec.signs) {
    check_index(s.var_i, s.shock_j);
    if (s.h_lo < 0 || s.h_hi < s.h_lo)
      throw IndexOutOfBounds("compile: bad sign-restriction horizon range");
    if (s.h_hi > vma.horizons)
      throw HorizonExceeded("compile: sign-restriction horizon beyond computed VMA");
    for (int h = s.h_lo; h <= s.h_hi; ++h) {
      const Vector row =
          static_cast<double>(s.direction) * (vma.C[h] * l1).row(s.var_i).transpose();
      append_row(prog.S[s.shock_j], row);
    }
  }

  prog.norm_rows = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    if (norm.sign_rule == NormalizationRule::Sign::diag_a0_nonneg)
      prog.norm_rows.row(k) = solve_l1(Vector::Unit(n, k)).transpose();
    else
      prog.norm_rows.row(k) = l1.row(k);
  }
  prog.build_order.resize(n);
  for (int k = 0; k < n; ++k) prog.build_order[k] = k;
  prog.ordered = false;
  return prog;
}

// Order positions within each block by zero-restriction count, descending,
// with the shock of interest first among ties.
inline RestrictionProgram order_variables(RestrictionProgram prog) {
  const int n = prog.n();
  prog.build_order.resize(n);
  for (int b = 0; b < prog.partition.n_blocks(); ++b) {
    const int start = prog.partition.block_start(b);
    const int size = prog.partition.block_sizes[b];
    std::vector<int> pos(size);
    for (int k = 0; k < size; ++k) pos[k] = start + k;
    std::stable_sort(pos.begin(), pos.end(), [&](int a, int c) {
      const int fa = prog.zero_count(a), fc = prog.zero_count(c);
      if (fa != fc) return fa > fc;
      if ((a == prog.j_star) != (c == prog.j_star)) return a == prog.j_star;
      return false;
    });
    for (int k = 0; k < size; ++k) prog.build_order[start + k] = pos[k];
  }
  prog.ordered = true;
  return prog;
}

struct IdStatus {
  enum class Tag { point_identified, set_identified, over_restricted };
  enum class Convexity { cond1, cond2, cond3, none };
  Tag tag = Tag::set_identified;
  Convexity convexity = Convexity::none;
  // per block: (block size, ordered zero counts)
  std::vector<std::pair<int, std::vector<int>>> block_counts;
  std::optional<bool> sign_feasible;  // only set when sign restrictions bind on j*
};

namespace detail {

inline int matrix_rank(const Matrix& m, double tol = 1e-10) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector s = svd.singularValues();
  const double cutoff = tol * (1.0 + s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

// Strict-feasibility certificate: search for a unit q with the stacked
// equality rows zeroed and strictly positive slack on the sign rows plus
// the normalization row. Random projected multistart with a short
// max-min-slack ascent per start.
inline bool strict_sign_feasible(const Matrix& eq_rows, const Matrix& strict_rows, int starts,
                                 RngStream& rng) {
  const Matrix w = null_space_of_rows(eq_rows);
  if (w.cols() == 0) return false;
  const Matrix a = strict_rows * w;  // rows act on x in the null basis
  auto min_slack = [&](const Vector& x) {
    return (a * x).minCoeff();
  };
  for (int s = 0; s < starts; ++s) {
    Vector x(w.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.gaussian();
    if (x.norm() < 1e-12) continue;
    x.normalize();
    if (min_slack(x) < min_slack(-x)) x = -x;
    double step = 0.5;
    for (int it = 0; it < 60 && min_slack(x) <= 0.0; ++it) {
      Eigen::Index worst = 0;
      (a * x).minCoeff(&worst);
      Vector g = a.row(worst).transpose();
      g -= g.dot(x) * x;
      if (g.norm() < 1e-14) break;
      Vector cand = (x + step * g.normalized()).normalized();
      if (min_slack(cand) > min_slack(x))
        x = cand;
      else
        step *= 0.5;
    }
    if (min_slack(x) > 1e-10) return true;
  }
  return false;
}

}  // namespace detail

// Identification status per the restriction-count staircase: every ordered
// slot j in a block of size m with exactly m - j - 1 (0-based) independent
// zero rows is point identified; a count above the staircase over-restricts;
// anything below it leaves a set. Convexity conditions are matched for the
// block containing the shock of interest.
inline IdStatus classify(const RestrictionProgram& prog,
                         const EigenIdentification* sol = nullptr,
                         int feasibility_starts = 200) {
  if (!prog.ordered) throw ValidationError("classify: program must be ordered first");
  IdStatus st;
  bool any_over = false, all_staircase = true, rank_ok = true;
  for (int b = 0; b < prog.partition.n_blocks(); ++b) {
    const int start = prog.partition.block_start(b);
    const int size = prog.partition.block_sizes[b];
    std::vector<int> counts(size);
    for (int k = 0; k < size; ++k) {
      const int pos = prog.build_order[start + k];
      const int f = prog.zero_count(pos);
      counts[k] = f;
      const int staircase = size - 1 - k;
      if (f > staircase) any_over = true;
      if (f != staircase) all_staircase = false;
      if (detail::matrix_rank(prog.F[pos]) < f) rank_ok = false;
    }
    st.block_counts.emplace_back(size, std::move(counts));
  }
  if (any_over)
    st.tag = IdStatus::Tag::over_restricted;
  else if (all_staircase && rank_ok)
    st.tag = IdStatus::Tag::point_identified;
  else
    st.tag = IdStatus::Tag::set_identified;

  // Convexity conditions for the block holding the shock of interest.
  const int bi = prog.partition.block_of(prog.j_star);
  const int start = prog.partition.block_start(bi);
  const int m = prog.partition.block_sizes[bi];
  int slot = 0;  // 0-based slot of j* within its block
  for (int k = 0; k < m; ++k)
    if (prog.build_order[start + k] == prog.j_star) slot = k;
  auto f_at = [&](int k) { return prog.zero_count(prog.build_order[start + k]); };
  int exact_prefix = 0;  // longest exactly-identified leading run
  while (exact_prefix < slot && f_at(exact_prefix) == m - 1 - exact_prefix) ++exact_prefix;
  if (slot == 0 && f_at(0) < m - 1) {
    st.convexity = IdStatus::Convexity::cond1;
  } else if (slot >= 1) {
    bool all_strict = true;
    for (int k = 0; k < slot; ++k)
      if (!(f_at(k) < m - 1 - k)) all_strict = false;
    if (all_strict && f_at(slot) <= m - 1 - slot) {
      st.convexity = IdStatus::Convexity::cond2;
    } else if (exact_prefix >= 1) {
      bool tail_strict = true;
      for (int k = exact_prefix; k <= slot; ++k)
        if (!(f_at(k) < m - 1 - k)) tail_strict = false;
      if (tail_strict) st.convexity = IdStatus::Convexity::cond3;
    }
  }

  // Strict sign-feasibility certificate when sign restrictions bind on j*.
  if (prog.S[prog.j_star].rows() > 0 && sol != nullptr) {
    const int n = prog.n();
    Matrix eq = prog.F[prog.j_star];
    // stay inside the eigenspace of the block
    for (int b2 = 0; b2 < prog.partition.n_blocks(); ++b2) {
      if (b2 == bi) continue;
      const int s2 = prog.partition.block_start(b2);
      for (int k = 0; k < prog.partition.block_sizes[b2]; ++k) {
        eq.conservativeResize(eq.rows() + 1, n);
        eq.row(eq.rows() - 1) = sol->Q.col(s2 + k).transpose();
      }
    }
    if (st.convexity == IdStatus::Convexity::cond3) {
      // exactly identified leading columns are fixed; q must be orthogonal
      Matrix built(n, 0);
      for (int k = 0; k < exact_prefix; ++k) {
        const int pos = prog.build_order[start + k];
        Matrix rows = prog.F[pos];
        for (Eigen::Index c = 0; c < built.cols(); ++c) {
          rows.conservativeResize(rows.rows() + 1, n);
          rows.row(rows.rows() - 1) = built.col(c).transpose();
        }
        for (int b2 = 0; b2 < prog.partition.n_blocks(); ++b2) {
          if (b2 == bi) continue;
          const int s2 = prog.partition.block_start(b2);
          for (int kk = 0; kk < prog.partition.block_sizes[b2]; ++kk) {
            rows.conservativeResize(rows.rows() + 1, n);
            rows.row(rows.rows() - 1) = sol->Q.col(s2 + kk).transpose();
          }
        }
        const Matrix nullb = null_space_of_rows(rows);
        if (nullb.cols() != 1) break;
        Vector q = nullb.col(0);
        if (prog.norm_rows.row(pos).dot(q) < 0.0) q = -q;
        built.conservativeResize(n, built.cols() + 1);
        built.col(built.cols() - 1) = q;
        eq.conservativeResize(eq.rows() + 1, n);
        eq.row(eq.rows() - 1) = q.transpose();
      }
    }
    Matrix strict = prog.S[prog.j_star];
    strict.conservativeResize(strict.rows() + 1, n);
    strict.row(strict.rows() - 1) = prog.norm_rows.row(prog.j_star);
    RngStream rng(20240315u);
    st.sign_feasible = detail::strict_sign_feasible(eq, strict, feasibility_starts, rng);
  }
  return st;
}

// The unique admissible Q under a point-identifying restriction pattern:
// within each block, each column is the (sign-normalized) unit vector of
// the block eigenspace orthogonal to its zero rows and to the previously
// built columns.
inline Matrix exact_point_identify_q(const EigenIdentification& sol,
                                     const RestrictionProgram& prog) {
  if (!prog.ordered) throw ValidationError("exact_point_identify: program must be ordered");
  const int n = prog.n();
  Matrix q_full = Matrix::Zero(n, n);
  for (int b = 0; b < prog.partition.n_blocks(); ++b) {
    const int start = prog.partition.block_start(b);
    const int m = prog.partition.block_sizes[b];
    const Matrix v = sol.Q.middleCols(start, m);  // block eigenspace basis
    Matrix built(m, 0);                           // coordinates of built columns
    for (int k = 0; k < m; ++k) {
      const int pos = prog.build_order[start + k];
      // rows in the m-dimensional block coordinates
      Matrix rows(prog.F[pos].rows() + built.cols(), m);
      if (prog.F[pos].rows() > 0) rows.topRows(prog.F[pos].rows()) = prog.F[pos] * v;
      for (Eigen::Index c = 0; c < built.cols(); ++c)
        rows.row(prog.F[pos].rows() + c) = built.col(c).transpose();
      const Matrix nullb = null_space_of_rows(rows);
      if (nullb.cols() != 1)
        throw RedundantRestrictions(
            "exact_point_identify: sequential system does not pin a unique direction "
            "(null dimension " +
            std::to_string(nullb.cols()) + " at block " + std::to_string(b) + ", slot " +
            std::to_string(k) + ")");
      Vector x = nullb.col(0);
      Vector q = v * x;
      if (prog.norm_rows.row(pos).dot(q) < 0.0) {
        q = -q;
        x = -x;
      }
      q_full.col(pos) = q;
      built.conservativeResize(m, built.cols() + 1);
      built.col(built.cols() - 1) = x;
    }
  }
  return q_full;
}

inline StructuralParams exact_point_identify(const ReducedForm& rf,
                                             const EigenIdentification& sol,
                                             const RestrictionProgram& prog,
                                             const NormalizationRule& norm = {}) {
  (void)norm;  // sign behavior is carried by prog.norm_rows
  const Matrix q_full = exact_point_identify_q(sol, prog);
  const int n = prog.n();
  StructuralParams out;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix l1_inv = sol.omega1_tr.triangularView<Eigen::Lower>().solve(id);
  out.A0 = q_full.transpose() * l1_inv;
  out.A_plus = out.A0 * rf.B;
  out.Lambda = sol.lambda;
  return out;
}

}  // namespace hsvar
