#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hsvar/errors.hpp"
#include "hsvar/rng.hpp"

namespace hsvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace detail {

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace detail

// Maximum allowed asymmetry before a matrix is rejected as non-symmetric.
// Inputs within tolerance are symmetrized as (A + A')/2 before use, since
// long Gibbs chains accumulate rounding in the covariance draws.
inline double symmetry_tolerance(const Matrix& a) {
  return 1e-8 * (1.0 + detail::max_abs(a));
}

inline Matrix require_symmetric(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) throw NotSymmetric(std::string(who) + ": matrix not square");
  const double asym = detail::max_abs(a - a.transpose());
  if (asym > symmetry_tolerance(a))
    throw NotSymmetric(std::string(who) + ": asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");
  return 0.5 * (a + a.transpose());
}

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
// L L' = omega with a strictly positive diagonal.
inline Matrix cholesky_lower(const Matrix& omega) {
  const Matrix a = require_symmetric(omega, "cholesky_lower");
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0))
      throw NotPositiveDefinite("cholesky_lower: pivot " + std::to_string(pivot) +
                                " at index " + std::to_string(j));
    l(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Eigen-pairs of a symmetric matrix with eigenvalues sorted non-increasing.
// Near-ties (gap below a scale-relative tolerance) are ordered by the index
// of the largest-magnitude eigenvector entry so repeated runs and platforms
// agree on the column order; statistical multiplicity handling lives in the
// identification layer, not here.
struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns
};

inline SymEigen sym_eigen_desc(const Matrix& omega) {
  const Matrix a = require_symmetric(omega, "sym_eigen_desc");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("sym_eigen_desc: solver failed");
  const Eigen::Index n = a.rows();
  SymEigen out;
  out.values = Vector(n);
  out.vectors = Matrix(n, n);
  // Eigen returns ascending order; reverse it.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  // Deterministic orientation: largest-magnitude entry of each column positive.
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index imax = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
  }
  // Tie-break near-equal eigenvalues by the pivot row of their eigenvectors.
  const double tie_tol = 1e-10 * (1.0 + std::abs(out.values(0)));
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && std::abs(out.values(stop - 1) - out.values(stop)) <= tie_tol) ++stop;
    if (stop - start > 1) {
      std::vector<Eigen::Index> idx(static_cast<size_t>(stop - start));
      std::iota(idx.begin(), idx.end(), start);
      auto pivot_row = [&](Eigen::Index j) {
        Eigen::Index imax = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&imax);
        return imax;
      };
      std::sort(idx.begin(), idx.end(),
                [&](Eigen::Index a_, Eigen::Index b_) { return pivot_row(a_) < pivot_row(b_); });
      Vector vals = out.values;
      Matrix vecs = out.vectors;
      for (Eigen::Index k = start; k < stop; ++k) {
        out.values(k) = vals(idx[static_cast<size_t>(k - start)]);
        out.vectors.col(k) = vecs.col(idx[static_cast<size_t>(k - start)]);
      }
    }
    start = stop;
  }
  return out;
}

struct SvdResult {
  Matrix u;
  Vector s;  // non-increasing, non-negative
  Matrix v;
};

// Full singular value decomposition, a = U diag(s) V'.
inline SvdResult svd_decomp(const Matrix& a) {
  if (!a.allFinite()) throw NumericalError("svd_decomp: non-finite input");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SvdResult{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

// Residual of the least-squares projection of z onto the column span of
// `basis`. Rank-deficient and empty bases are allowed.
inline Vector project_out(const Vector& z, const Matrix& basis) {
  if (basis.cols() == 0) return z;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(basis);
  return z - basis * cod.solve(z);
}

// Inverse-Wishart sample via the Bartlett decomposition of the Wishart
// distribution of the inverse scale.
inline Matrix draw_inverse_wishart(const Matrix& scale, int dof, RngStream& rng) {
  const Eigen::Index n = scale.rows();
  if (dof <= n + 1)
    throw DofTooSmall("draw_inverse_wishart: dof " + std::to_string(dof) +
                      " <= n + 1 = " + std::to_string(n + 1));
  const Matrix s = require_symmetric(scale, "draw_inverse_wishart");
  const Matrix sinv_raw = s.llt().solve(Matrix::Identity(n, n));
  const Matrix sinv = 0.5 * (sinv_raw + sinv_raw.transpose());
  const Matrix gl = cholesky_lower(sinv);  // scale^{-1} = gl gl'
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = std::sqrt(rng.chi_square(static_cast<double>(dof - i)));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.gaussian();
  }
  const Matrix f = gl * a;              // W = f f' ~ Wishart(scale^{-1}, dof)
  const Matrix finv = f.inverse();      // lower-triangular inverse
  Matrix omega = finv.transpose() * finv;  // W^{-1}
  return 0.5 * (omega + omega.transpose());
}

// Spectral radius of a general square matrix (companion stability checks).
inline double spectral_radius(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Orthonormal basis of the null space of the rows of `rows` (n columns).
// Returns an n x d matrix, d = n - rank.
inline Matrix null_space_of_rows(const Matrix& rows, double tol = 1e-10) {
  const Eigen::Index n = rows.cols();
  if (rows.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const Vector s = svd.singularValues();
  const double cutoff = tol * (1.0 + (s.size() > 0 ? s(0) : 0.0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// Orthonormalization of the columns of a full-column-rank matrix (thin QR).
inline Matrix orthonormalize_columns(const Matrix& a) {
  if (a.cols() == 0) return a;
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  // Keep a deterministic orientation relative to the input columns.
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (q.col(j).dot(a.col(j)) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace hsvar
