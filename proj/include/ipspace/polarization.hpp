#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ipspace/linalg.hpp"
#include "ipspace/point_config.hpp"
#include "ipspace/spaces.hpp"

namespace ipspace {

/// Pairwise polarization values of a configuration anchored at one of its
/// points. Row/column k corresponds to `point_indices[k]`; the base point
/// itself is omitted.
struct GramMatrix {
  Matrix entries;
  std::size_t base_index = 0;
  std::vector<std::size_t> point_indices;

  Index size() const noexcept { return entries.rows(); }
  Index numerical_rank(double rank_tol = 1e-9) const {
    return linalg::numerical_rank(entries, rank_tol);
  }
  bool is_singular(double rank_tol = 1e-9) const {
    return numerical_rank(rank_tol) < size();
  }
};

struct ComplexInnerProductValue {
  double re = 0.0;
  double im = 0.0;

  std::complex<double> value() const { return {re, im}; }
};

namespace detail {
inline void require_real_view(const NormedSpace& space, const char* op) {
  if (space.field() != Field::Real) {
    throw InvalidArgument(std::string(op) + " works on real (or realified) spaces");
  }
}
}  // namespace detail

/// (||u - b||^2 + ||v - b||^2 - ||u - v||^2) / 2.
inline double polarize_real(const NormedSpace& space, const Vector& u, const Vector& v,
                            const Vector& base) {
  detail::require_real_view(space, "polarize_real");
  space.check(u);
  space.check(v);
  space.check(base);
  return 0.5 * (space.squared_norm_unchecked(u - base) + space.squared_norm_unchecked(v - base) -
                space.squared_norm_unchecked(u - v));
}

inline double polarize_real(const NormedSpace& space, const Vector& u, const Vector& v) {
  return polarize_real(space, u, v, Vector::Zero(space.real_dim()));
}

inline GramMatrix gram_matrix(const NormedSpace& space, const std::vector<Vector>& points,
                              std::size_t base_index) {
  detail::require_real_view(space, "gram_matrix");
  if (base_index >= points.size()) throw InvalidArgument("base index out of range");
  for (const auto& p : points) space.check(p);
  GramMatrix g;
  g.base_index = base_index;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (i != base_index) g.point_indices.push_back(i);
  const Index m = static_cast<Index>(g.point_indices.size());
  const Vector& base = points[base_index];
  std::vector<double> sq(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    sq[static_cast<std::size_t>(i)] = space.squared_norm_unchecked(points[g.point_indices[i]] - base);
  }
  g.entries.resize(m, m);
  for (Index i = 0; i < m; ++i) {
    g.entries(i, i) = sq[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < m; ++j) {
      const double d2 =
          space.squared_norm_unchecked(points[g.point_indices[i]] - points[g.point_indices[j]]);
      const double v = 0.5 * (sq[static_cast<std::size_t>(i)] + sq[static_cast<std::size_t>(j)] - d2);
      g.entries(i, j) = v;
      g.entries(j, i) = v;
    }
  }
  return g;
}

inline GramMatrix gram_matrix(const PointConfig& config, std::size_t base_index) {
  return gram_matrix(config.space, config.points, base_index);
}

/// Gram matrix of polarization values from a distance table alone:
/// entry (i, j) = (d_0i^2 + d_0j^2 - d_ij^2) / 2 with point 0 as base.
inline Matrix gram_from_distances(const Matrix& d) {
  const Index m = d.rows() - 1;
  Matrix g(std::max<Index>(m, 0), std::max<Index>(m, 0));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const double a = d(0, i + 1), b = d(0, j + 1), c = d(i + 1, j + 1);
      g(i, j) = 0.5 * (a * a + b * b - c * c);
    }
  return g;
}

/// <f, g> = <f, g>_R - i <J f, g>_R on the realification.
inline ComplexInnerProductValue polarize_complex(const NormedSpace& space, const Vector& f,
                                                 const Vector& g) {
  if (space.field() != Field::Complex) {
    throw NotComplexSpace("polarize_complex requires a complex space");
  }
  const auto [real, j] = realify(space);
  const double re = polarize_real(real, f, g);
  const double im = -polarize_real(real, j.apply(f), g);
  return {re, im};
}

/// Signed parallelogram defect ||f+g||^2 + ||f-g||^2 - 2(||f||^2 + ||g||^2).
inline double parallelogram_residual(const NormedSpace& space, const Vector& f,
                                     const Vector& g) {
  space.check(f);
  space.check(g);
  return space.squared_norm_unchecked(f + g) + space.squared_norm_unchecked(f - g) -
         2.0 * (space.squared_norm_unchecked(f) + space.squared_norm_unchecked(g));
}

}  // namespace ipspace
