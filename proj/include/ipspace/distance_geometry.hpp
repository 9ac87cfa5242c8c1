#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "ipspace/linalg.hpp"
#include "ipspace/point_config.hpp"
#include "ipspace/polarization.hpp"
#include "ipspace/tolerances.hpp"

namespace ipspace {

/// Pairwise distances d_ij of points x_0..x_n. Validated on construction:
/// symmetric, zero diagonal, nonnegative, and metric up to 1e-9.
class DistanceMatrix {
public:
  explicit DistanceMatrix(Matrix d) : d_(std::move(d)) { validate(); }

  Index points() const noexcept { return d_.rows(); }
  const Matrix& entries() const noexcept { return d_; }
  double operator()(Index i, Index j) const { return d_(i, j); }
  double max_distance() const { return d_.size() ? d_.maxCoeff() : 0.0; }

private:
  void validate() const {
    if (d_.rows() != d_.cols() || d_.rows() == 0) {
      throw InvalidDistanceMatrix("distance matrix must be square and non-empty");
    }
    if (!d_.allFinite()) throw InvalidDistanceMatrix("distance matrix has non-finite entries");
    const Index n = d_.rows();
    const double scale = std::max(1.0, d_.cwiseAbs().maxCoeff());
    for (Index i = 0; i < n; ++i) {
      if (d_(i, i) != 0.0) throw InvalidDistanceMatrix("diagonal must be zero");
      for (Index j = 0; j < n; ++j) {
        if (d_(i, j) < 0.0) throw InvalidDistanceMatrix("distances must be nonnegative");
        if (std::abs(d_(i, j) - d_(j, i)) > 1e-12 * scale) {
          throw InvalidDistanceMatrix("distance matrix is not symmetric");
        }
      }
    }
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
          if (d_(i, k) > d_(i, j) + d_(j, k) + 1e-9 * scale) {
            throw InvalidDistanceMatrix("triangle inequality fails for (" + std::to_string(i) +
                                        ", " + std::to_string(j) + ", " + std::to_string(k) + ")");
          }
  }

  Matrix d_;
};

inline DistanceMatrix distance_matrix(const PointConfig& config) {
  const Index n = static_cast<Index>(config.size());
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double v = config.space.norm_unchecked(config[static_cast<std::size_t>(i)] -
                                                   config[static_cast<std::size_t>(j)]);
      d(i, j) = v;
      d(j, i) = v;
    }
  return DistanceMatrix(std::move(d));
}

/// Squared distances bordered by ones, zero in the corner:
///   [ d_ij^2  1 ]
///   [ 1^T     0 ]
struct CayleyMengerMatrix {
  Matrix entries;

  Index points() const noexcept { return entries.rows() - 1; }
};

inline CayleyMengerMatrix cayley_menger(const DistanceMatrix& dm, double unit = 1.0) {
  const Index n = dm.points();
  Matrix cm = Matrix::Zero(n + 1, n + 1);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d = dm(i, j) / unit;
      cm(i, j) = d * d;
    }
    cm(i, n) = 1.0;
    cm(n, i) = 1.0;
  }
  return {std::move(cm)};
}

struct AffineDependence {
  bool dependent = false;
  double det = 0.0;          // determinant of the unscaled Cayley-Menger matrix
  double scaled_det = 0.0;   // determinant with distances divided by max d_ij
  double scale = 1.0;        // det = scaled_det * scale
  double min_gram_eigenvalue = 0.0;
};

/// Determinant of the Cayley-Menger matrix computed with distances divided by
/// their maximum. Scaling the squared-distance block by c multiplies the
/// bordered determinant by c^(points - 1).
inline AffineDependence cayley_menger_determinant(const DistanceMatrix& dm) {
  AffineDependence out;
  const Index n = dm.points();
  const double unit = dm.max_distance();
  if (unit == 0.0) {
    out.det = out.scaled_det = (n == 1) ? -1.0 : 0.0;
    out.scale = 1.0;
    return out;
  }
  const CayleyMengerMatrix cm = cayley_menger(dm, unit);
  out.scaled_det = cm.entries.partialPivLu().determinant();
  out.scale = std::pow(unit * unit, static_cast<double>(n - 1));
  out.det = out.scaled_det * out.scale;
  return out;
}

/// Minimum eigenvalue of the base-point Gram built from the distances, and
/// the threshold below which it disqualifies Euclidean realizability.
inline void check_euclidean_realizable(const DistanceMatrix& dm, double* min_eig = nullptr) {
  const Matrix g = gram_from_distances(dm.entries());
  if (g.size() == 0) {
    if (min_eig) *min_eig = 0.0;
    return;
  }
  const Vector ev = linalg::symmetric_eigenvalues(g);
  const double lo = ev.minCoeff();
  if (min_eig) *min_eig = lo;
  if (lo < -1e-9 * std::max(ev.maxCoeff(), 1e-300)) {
    throw NotEuclideanRealizable("polarized Gram of the distances has eigenvalue " +
                                 std::to_string(lo));
  }
}

/// Points are affinely dependent iff their Cayley-Menger matrix is singular.
/// Requires the distances to be realizable in a Euclidean space.
inline AffineDependence is_affinely_dependent(const DistanceMatrix& dm, double cm_tol = 1e-9) {
  double lo = 0.0;
  check_euclidean_realizable(dm, &lo);
  AffineDependence out = cayley_menger_determinant(dm);
  out.min_gram_eigenvalue = lo;
  out.dependent = std::abs(out.scaled_det) <= cm_tol;
  return out;
}

// ---------------------------------------------------------------------------
// Trilateration

struct Trilateration {
  Vector estimate;                  // point of span(anchors) matching the distances
  double out_of_span_residual = 0;  // d_0^2 - ||estimate||^2, >= 0
  double system_residual = 0;       // residual of the linear system on non-pivot anchors
  bool unique = false;              // out_of_span_residual within tolerance
  std::vector<Index> pivots;        // anchors (by index) spanning the anchor set
};

/// Recovers y from its distances to anchors y_0 = 0, y_1, ..., y_n by solving
/// <y, y_j> = (||y_j||^2 + d_0^2 - d_j^2) / 2 within span(anchors). The point
/// is determined uniquely exactly when the out-of-span residual vanishes.
inline Trilateration trilaterate(const PointConfig& anchors, const std::vector<double>& dists,
                                 const Tolerances& tol = kDefaultTolerances) {
  const NormedSpace& space = anchors.space;
  space.euclidean_form();
  if (space.field() != Field::Real) throw InvalidArgument("trilaterate works on real spaces");
  if (dists.size() != anchors.size()) {
    throw InvalidArgument("need one distance per anchor");
  }
  for (double d : dists)
    if (!std::isfinite(d) || d < 0.0) throw InvalidArgument("distances must be finite and nonnegative");
  if (anchors[0].cwiseAbs().maxCoeff() != 0.0) {
    throw InvalidArgument("first anchor must be the origin");
  }
  Trilateration out;
  const Index k = space.real_dim();
  const double d0sq = dists[0] * dists[0];
  double scale = std::max(1.0, d0sq);
  for (const auto& a : anchors.points) scale = std::max(scale, std::pow(space.norm_unchecked(a), 2));
  if (anchors.size() == 1) {
    out.estimate = Vector::Zero(k);
    out.out_of_span_residual = d0sq;
    out.unique = d0sq <= tol.rank_tol * scale;
    if (out.unique) out.out_of_span_residual = 0.0;
    return out;
  }
  const GramMatrix gram = gram_matrix(anchors, 0);
  const Index m = gram.size();
  Vector rhs(m);
  for (Index j = 0; j < m; ++j) {
    const std::size_t a = gram.point_indices[static_cast<std::size_t>(j)];
    rhs[j] = 0.5 * (gram.entries(j, j) + d0sq - dists[a] * dists[a]);
  }
  const auto pc = linalg::pivoted_cholesky(gram.entries, tol.rank_tol);
  const Index r = static_cast<Index>(pc.pivots.size());
  Vector estimate = Vector::Zero(k);
  if (r > 0) {
    Vector rp(r);
    for (Index a = 0; a < r; ++a) rp[a] = rhs[pc.pivots[a]];
    const Matrix& L = pc.lower;
    const Vector coef = L.transpose().triangularView<Eigen::Upper>().solve(
        L.triangularView<Eigen::Lower>().solve(rp));
    for (Index a = 0; a < r; ++a) {
      estimate += coef[a] * anchors[gram.point_indices[static_cast<std::size_t>(pc.pivots[a])]];
      out.pivots.push_back(static_cast<Index>(gram.point_indices[static_cast<std::size_t>(pc.pivots[a])]));
    }
  }
  // every anchor equation, including the non-pivot ones, must hold
  const Matrix& form = space.euclidean_form();
  double sys = 0.0;
  for (Index j = 0; j < m; ++j) {
    const Vector& y = anchors[gram.point_indices[static_cast<std::size_t>(j)]];
    sys = std::max(sys, std::abs(estimate.dot(form * y) - rhs[j]));
  }
  out.system_residual = sys;
  if (sys > std::sqrt(tol.rank_tol) * scale) {
    throw InconsistentDistances("anchor equations disagree by " + std::to_string(sys));
  }
  const double en = space.norm_unchecked(estimate);
  double resid = d0sq - en * en;
  const double cut = tol.rank_tol * scale;
  if (resid < -std::sqrt(tol.rank_tol) * scale) {
    throw InconsistentDistances("distance to the origin is shorter than the in-span solution");
  }
  if (std::abs(resid) <= cut) resid = std::max(resid, 0.0);
  out.out_of_span_residual = std::max(resid, 0.0);
  out.unique = out.out_of_span_residual <= cut;
  out.estimate = std::move(estimate);
  return out;
}

}  // namespace ipspace
