#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ipspace/spaces.hpp"

namespace ipspace::linalg {

/// Eigenvalue threshold below which a Gram eigenvalue counts as zero.
inline double rank_threshold(double max_eigenvalue, double rank_tol = 1e-9) {
  return rank_tol * std::max(max_eigenvalue, 1e-12);
}

inline Vector symmetric_eigenvalues(const Matrix& m) {
  if (m.size() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Number of eigenvalues above the scale-relative threshold.
inline Index numerical_rank(const Matrix& gram, double rank_tol = 1e-9) {
  if (gram.size() == 0) return 0;
  const Vector ev = symmetric_eigenvalues(gram);
  const double cut = rank_threshold(ev.maxCoeff(), rank_tol);
  return static_cast<Index>((ev.array() > cut).count());
}

struct PivotedCholesky {
  std::vector<Index> pivots;  // selected indices, in selection order
  Matrix lower;               // pivots x pivots Cholesky factor of the pivot Gram
};

/// Greedy modified Gram-Schmidt carried out on a Gram matrix: repeatedly
/// select the remaining index with the largest residual squared norm, and
/// stop once that residual falls to rank_tol times the largest diagonal.
inline PivotedCholesky pivoted_cholesky(const Matrix& gram, double rank_tol = 1e-9) {
  const Index n = gram.rows();
  PivotedCholesky out;
  if (n == 0) return out;
  Vector residual = gram.diagonal();
  const double scale = std::max(residual.maxCoeff(), 0.0);
  if (!(scale > 0.0)) {
    out.lower = Matrix(0, 0);
    return out;
  }
  const double cut = rank_tol * scale;
  // columns of the partial factor, one per selected pivot, indexed by original row
  std::vector<Vector> cols;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (static_cast<Index>(out.pivots.size()) < n) {
    Index best = -1;
    double best_val = cut;
    for (Index i = 0; i < n; ++i) {
      if (!used[static_cast<std::size_t>(i)] && residual[i] > best_val) {
        best = i;
        best_val = residual[i];
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    const double pivot = std::sqrt(best_val);
    Vector col(n);
    for (Index i = 0; i < n; ++i) {
      double v = gram(i, best);
      for (const auto& c : cols) v -= c[i] * c[best];
      col[i] = v / pivot;
    }
    for (Index i = 0; i < n; ++i) {
      if (!used[static_cast<std::size_t>(i)]) residual[i] -= col[i] * col[i];
    }
    cols.push_back(std::move(col));
    out.pivots.push_back(best);
  }
  const Index r = static_cast<Index>(out.pivots.size());
  out.lower = Matrix::Zero(r, r);
  for (Index a = 0; a < r; ++a)
    for (Index b = 0; b <= a; ++b) out.lower(a, b) = cols[static_cast<std::size_t>(b)][out.pivots[a]];
  return out;
}

/// Condition number of a symmetric positive semidefinite matrix.
inline double spd_condition(const Matrix& m) {
  const Vector ev = symmetric_eigenvalues(m);
  if (ev.size() == 0) return 1.0;
  const double lo = ev.minCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / lo;
}

/// Orthonormal basis (columns) of the orthogonal complement of span(basis),
/// built by orthonormalizing the standard basis vectors in index order and
/// dropping those whose residual after projection is below drop_tol.
/// `basis` must have orthonormal columns.
inline Matrix complement_basis(const Matrix& basis, Index ambient, double drop_tol = 1e-9) {
  const Index need = ambient - basis.cols();
  Matrix out(ambient, std::max<Index>(need, 0));
  Index found = 0;
  for (Index i = 0; i < ambient && found < need; ++i) {
    Vector v = Vector::Unit(ambient, i);
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (Index c = 0; c < basis.cols(); ++c) v -= basis.col(c).dot(v) * basis.col(c);
      for (Index c = 0; c < found; ++c) v -= out.col(c).dot(v) * out.col(c);
    }
    const double r = v.norm();
    if (r < drop_tol) continue;
    out.col(found++) = v / r;
  }
  if (found < need) out.conservativeResize(ambient, found);
  return out;
}

}  // namespace ipspace::linalg
