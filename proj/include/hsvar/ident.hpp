#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/linalg.hpp"
#include "hsvar/reduced_form.hpp"

namespace hsvar {

// Grouping of the descending eigenvalue positions into contiguous blocks of
// declared multiplicity. Singleton blocks are point-identified positions;
// larger blocks share an eigenspace.
struct Partition {
  std::vector<int> block_sizes;

  static Partition singletons(int n) {
    Partition p;
    p.block_sizes.assign(n, 1);
    return p;
  }

  int total() const {
    int t = 0;
    for (int s : block_sizes) t += s;
    return t;
  }

  void validate(int n) const {
    if (block_sizes.empty()) throw InvalidPartition("partition: empty");
    for (int s : block_sizes)
      if (s < 1) throw InvalidPartition("partition: block size < 1");
    if (total() != n) throw InvalidPartition("partition: sizes do not sum to n");
  }

  int n_blocks() const { return static_cast<int>(block_sizes.size()); }

  // 0-based start position of block b
  int block_start(int b) const {
    int s = 0;
    for (int i = 0; i < b; ++i) s += block_sizes[i];
    return s;
  }

  // block index containing 0-based position j
  int block_of(int j) const {
    int s = 0;
    for (int b = 0; b < n_blocks(); ++b) {
      s += block_sizes[b];
      if (j < s) return b;
    }
    throw InvalidPartition("partition: position out of range");
  }
};

struct NormalizationRule {
  enum class Sign { diag_a0_nonneg, diag_c_nonneg };
  enum class Order { lambda_descending };
  Sign sign_rule = Sign::diag_a0_nonneg;
  Order order_rule = Order::lambda_descending;
};

// Eigen-decomposition solution of the identification problem:
// Omega1tr^{-1} Omega2 Omega1tr^{-1}' = Q diag(lambda) Q', C = Omega1tr Q.
struct EigenIdentification {
  Vector lambda;     // descending, strictly positive
  Matrix Q;          // orthogonal
  Matrix C;          // Omega1tr * Q
  Matrix omega1_tr;  // cached Cholesky factor of Omega1
  Partition partition;
  std::vector<int> sign_degenerate;  // columns whose normalization entry was exactly zero
};

struct StructuralParams {
  Matrix A0;
  Matrix A_plus;
  Vector Lambda;
};

// Row vector r such that r * q_k is the sign-normalization entry for the
// column at eigen position k under the given rule.
inline Vector sign_rule_row(const EigenIdentification& sol, const NormalizationRule& norm,
                            int position) {
  const Eigen::Index n = sol.Q.rows();
  if (norm.sign_rule == NormalizationRule::Sign::diag_a0_nonneg) {
    // [A0]_kk = q_k' Omega1tr^{-1} e_k
    Vector e = Vector::Zero(n);
    e(position) = 1.0;
    return sol.omega1_tr.triangularView<Eigen::Lower>().solve(e);
  }
  // [C]_kk = (e_k' Omega1tr) q_k
  return sol.omega1_tr.row(position).transpose();
}

// Apply the ordering and sign rules in place; idempotent.
inline EigenIdentification normalize(EigenIdentification sol, const NormalizationRule& norm) {
  const Eigen::Index n = sol.lambda.size();
  // order: lambda descending with a stable re-sort
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sol.lambda(a) > sol.lambda(b); });
  Vector lam(n);
  Matrix q(sol.Q.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lam(i) = sol.lambda(idx[static_cast<size_t>(i)]);
    q.col(i) = sol.Q.col(idx[static_cast<size_t>(i)]);
  }
  sol.lambda = lam;
  sol.Q = q;
  sol.sign_degenerate.clear();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector row = sign_rule_row(sol, norm, static_cast<int>(j));
    const double v = row.dot(sol.Q.col(j));
    if (v < 0.0)
      sol.Q.col(j) = -sol.Q.col(j);
    else if (v == 0.0)
      sol.sign_degenerate.push_back(static_cast<int>(j));
  }
  sol.C = sol.omega1_tr * sol.Q;
  return sol;
}

// Identification via the symmetric eigenproblem of
// Omega1tr^{-1} Omega2 Omega1tr^{-1}'.
inline EigenIdentification solve_eigen(const ReducedForm& rf, const NormalizationRule& norm = {}) {
  const Matrix l1 = cholesky_lower(rf.omega1);
  const Eigen::Index n = l1.rows();
  const Matrix o2 = require_symmetric(rf.omega2, "solve_eigen");
  Matrix w = l1.triangularView<Eigen::Lower>().solve(o2);
  w = l1.triangularView<Eigen::Lower>().solve(Matrix(w.transpose()));
  const SymEigen es = sym_eigen_desc(0.5 * (w + w.transpose()));
  EigenIdentification sol;
  sol.lambda = es.values;
  sol.Q = es.vectors;
  sol.omega1_tr = l1;
  sol.partition = Partition::singletons(static_cast<int>(n));
  sol = normalize(std::move(sol), norm);
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(sol.lambda(i) > 0.0))
      throw NotPositiveDefinite("solve_eigen: nonpositive eigenvalue (regime-2 covariance)");
  return sol;
}

// The same solution through the singular value decomposition of
// Omega1tr^{-1} Omega2tr: singular values are sqrt(lambda) and the left
// singular vectors span the same eigenvectors.
inline EigenIdentification solve_svd(const ReducedForm& rf, const NormalizationRule& norm = {}) {
  const Matrix l1 = cholesky_lower(rf.omega1);
  const Matrix l2 = cholesky_lower(rf.omega2);
  const Matrix m = l1.triangularView<Eigen::Lower>().solve(l2);
  const SvdResult svd = svd_decomp(m);
  EigenIdentification sol;
  sol.lambda = svd.s.array().square();
  sol.Q = svd.u;
  sol.omega1_tr = l1;
  sol.partition = Partition::singletons(static_cast<int>(l1.rows()));
  return normalize(std::move(sol), norm);
}

// All observationally equivalent solutions (C S P', P Lambda P') over sign
// flips S and permutations P. Enumeration is 2^n n!, so n is capped.
inline std::vector<std::pair<Matrix, Vector>> enumerate_observational_equivalents(
    const Matrix& c, const Vector& lambda) {
  const int n = static_cast<int>(c.cols());
  if (n > 4) throw DimensionTooLarge("enumerate_observational_equivalents: n > 4");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::pair<Matrix, Vector>> out;
  do {
    for (int signs = 0; signs < (1 << n); ++signs) {
      Matrix cc(c.rows(), n);
      Vector ll(n);
      // column j of the variant is +-1 times column perm[j] of c
      for (int j = 0; j < n; ++j) {
        const double s = (signs >> j) & 1 ? -1.0 : 1.0;
        cc.col(j) = s * c.col(perm[j]);
        ll(j) = lambda(perm[j]);
      }
      out.emplace_back(std::move(cc), std::move(ll));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Replace the eigenvalues inside each declared block by their arithmetic
// mean (the Frobenius-closest common value) and re-orthonormalize the block
// eigenvectors with a QR pass.
inline EigenIdentification pool_eigenvalues(EigenIdentification sol, const Partition& partition) {
  const int n = static_cast<int>(sol.lambda.size());
  partition.validate(n);
  for (int b = 0; b < partition.n_blocks(); ++b) {
    const int start = partition.block_start(b);
    const int size = partition.block_sizes[b];
    if (size == 1) continue;
    const double mean = sol.lambda.segment(start, size).mean();
    sol.lambda.segment(start, size).setConstant(mean);
    sol.Q.middleCols(start, size) = orthonormalize_columns(sol.Q.middleCols(start, size));
  }
  sol.partition = partition;
  sol.C = sol.omega1_tr * sol.Q;
  return sol;
}

}  // namespace hsvar
