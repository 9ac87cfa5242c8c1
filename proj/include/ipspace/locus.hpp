#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "ipspace/isometry_extension.hpp"
#include "ipspace/point_config.hpp"
#include "ipspace/tolerances.hpp"

namespace ipspace {

/// ||h - f'|| - ||h - g'||: negative at f', positive at g'.
inline double phi(const NormedSpace& space, const Vector& f, const Vector& g, const Vector& h) {
  space.check(f);
  space.check(g);
  space.check(h);
  return space.norm_unchecked(h - f) - space.norm_unchecked(h - g);
}

struct LocusPoint {
  Vector h;
  double phi_value = 0.0;
};

namespace detail {

/// Smallest singular value of the two-column matrix [a b].
inline double pair_independence(const Vector& a, const Vector& b) {
  Matrix m(a.size(), 2);
  m.col(0) = a;
  m.col(1) = b;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()[1];
}

/// Bisects phi along the segment [a, b], whose endpoints have opposite signs.
inline std::optional<LocusPoint> bisect_locus(const NormedSpace& space, const Vector& f,
                                              const Vector& g, Vector a, Vector b,
                                              double locus_tol, int max_steps = 200) {
  double pa = space.norm_unchecked(a - f) - space.norm_unchecked(a - g);
  for (int step = 0; step < max_steps; ++step) {
    Vector mid = 0.5 * (a + b);
    const double pm = space.norm_unchecked(mid - f) - space.norm_unchecked(mid - g);
    if (std::abs(pm) <= locus_tol) return LocusPoint{std::move(mid), pm};
    if ((pm < 0.0) == (pa < 0.0)) {
      a = std::move(mid);
      pa = pm;
    } else {
      b = std::move(mid);
    }
  }
  return std::nullopt;
}

/// Equidistant points from f and g in the plane spanned by basis0, basis1.
/// Segments are chords of circles around the midpoint (f + g) / 2 with radii
/// {1/2, 1, 2, 4} times |f - g| in plane coordinates. Both endpoints get
/// their own angle: a chord through the midpoint would always bisect onto the
/// midpoint itself, which is equidistant in every norm.
inline std::vector<LocusPoint> trace_in_plane(const NormedSpace& space, const Vector& f,
                                              const Vector& g, const Vector& basis0,
                                              const Vector& basis1, std::size_t count,
                                              std::uint64_t seed, double locus_tol,
                                              double min_separation,
                                              const std::vector<Vector>& avoid = {}) {
  // plane coordinates of f and g
  Matrix basis(basis0.size(), 2);
  basis.col(0) = basis0;
  basis.col(1) = basis1;
  const auto solver = basis.colPivHouseholderQr();
  const Eigen::Vector2d cf = solver.solve(f);
  const Eigen::Vector2d cg = solver.solve(g);
  const Eigen::Vector2d center = 0.5 * (cf + cg);
  const double span = (cf - cg).norm();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const std::array<double, 4> radii{0.5, 1.0, 2.0, 4.0};
  std::vector<LocusPoint> out;
  const std::size_t max_segments = 64 * count + 256;
  auto far_enough = [&](const Vector& h) {
    for (const auto& p : out)
      if (space.norm_unchecked(p.h - h) < min_separation) return false;
    for (const auto& p : avoid)
      if (space.norm_unchecked(p - h) < min_separation) return false;
    return true;
  };
  for (std::size_t s = 0; s < max_segments && out.size() < count; ++s) {
    const double r = radii[s % radii.size()] * span;
    const double t1 = angle(rng), t2 = angle(rng);
    const Eigen::Vector2d p = center + r * Eigen::Vector2d(std::cos(t1), std::sin(t1));
    const Eigen::Vector2d q = center + r * Eigen::Vector2d(std::cos(t2), std::sin(t2));
    const Vector a = basis * p;
    const Vector b = basis * q;
    const double pa = space.norm_unchecked(a - f) - space.norm_unchecked(a - g);
    const double pb = space.norm_unchecked(b - f) - space.norm_unchecked(b - g);
    if (!(pa * pb < 0.0)) continue;
    auto hit = bisect_locus(space, f, g, a, b, locus_tol);
    if (hit && far_enough(hit->h)) out.push_back(std::move(*hit));
  }
  return out;
}

}  // namespace detail

/// Points h of span{f', g'} with ||h - f'|| = ||h - g'|| up to locus_tol.
inline std::vector<LocusPoint> trace_locus(const NormedSpace& space, const Vector& f,
                                           const Vector& g, std::size_t count,
                                           std::uint64_t seed,
                                           const Tolerances& tol = kDefaultTolerances) {
  space.check(f);
  space.check(g);
  if (count < 1) throw InvalidArgument("count must be >= 1");
  const double scale = std::max({f.norm(), g.norm(), 1e-300});
  if (detail::pair_independence(f, g) <= 1e-12 * scale) {
    throw DependentInputs("f' and g' must be linearly independent");
  }
  auto pts = detail::trace_in_plane(space, f, g, f, g, count, seed, tol.locus_tol, 1e-6);
  if (pts.size() < count) {
    throw LocusSearchExhausted("found " + std::to_string(pts.size()) + " of " +
                               std::to_string(count) + " locus points");
  }
  return pts;
}

/// {0, f', g', h_1, ..., h_(n-3)} with every h_i equidistant from f' and g',
/// so swapping f' and g' while fixing the rest is an isometry of the set.
struct IsoscelesConfig {
  PointConfig config;
  int n = 3;
  std::vector<std::size_t> pairing;  // the flip
  std::vector<double> phi_values;    // one per h_i
  double flip_defect = 0.0;
  bool negation_case = false;        // g' = -f': the flip extends to -id
};

inline IsoscelesConfig build_isosceles_config(const NormedSpace& space, const Vector& f,
                                              const Vector& g, int n, std::uint64_t seed,
                                              const Tolerances& tol = kDefaultTolerances) {
  space.check(f);
  space.check(g);
  if (n < 3) throw InvalidArgument("n must be >= 3");
  const double nf = space.norm_unchecked(f), ng = space.norm_unchecked(g);
  if (std::abs(nf - ng) > tol.hypothesis_tol * std::max({nf, ng, 1e-300})) {
    throw NotIsosceles("||f'|| and ||g'|| differ");
  }
  if (nf == 0.0 || space.norm_unchecked(f - g) <= tol.hypothesis_tol * nf) {
    throw NotIsosceles("f' and g' must be distinct and nonzero");
  }
  const Index k = space.real_dim();
  const Vector zero = Vector::Zero(k);
  const std::size_t extra = static_cast<std::size_t>(n - 3);
  const bool negation = space.norm_unchecked(f + g) <= tol.hypothesis_tol * nf;

  std::vector<LocusPoint> locus;
  if (extra > 0) {
    // Draw more than needed so points too close to 0 can be dropped.
    const std::vector<Vector> avoid{zero, f, g};
    if (negation) {
      if (k < 2) {
        throw LocusSearchExhausted("g' = -f' on a line: the only equidistant point is 0");
      }
      // the equidistant locus of f' and -f' meets span{f'} only at 0; use a
      // plane through f' and the standard basis vector least aligned with it
      Index best = 0;
      double best_ind = -1.0;
      for (Index i = 0; i < k; ++i) {
        const double ind = detail::pair_independence(f / f.norm(), Vector::Unit(k, i));
        if (ind > best_ind) {
          best_ind = ind;
          best = i;
        }
      }
      locus = detail::trace_in_plane(space, f, g, f, Vector::Unit(k, best), extra, seed,
                                     tol.locus_tol, 1e-6, avoid);
    } else {
      const double scale = std::max({f.norm(), g.norm(), 1e-300});
      if (detail::pair_independence(f, g) <= 1e-12 * scale) {
        throw DependentInputs("f' and g' must be linearly independent");
      }
      locus = detail::trace_in_plane(space, f, g, f, g, extra, seed, tol.locus_tol, 1e-6, avoid);
    }
    if (locus.size() < extra) {
      throw LocusSearchExhausted("found " + std::to_string(locus.size()) + " of " +
                                 std::to_string(extra) + " locus points");
    }
  }

  std::vector<Vector> pts{zero, f, g};
  IsoscelesConfig out{PointConfig(space, {zero}), n, {}, {}, 0.0, negation};
  for (const auto& p : locus) {
    pts.push_back(p.h);
    out.phi_values.push_back(p.phi_value);
  }
  out.config = PointConfig(space, std::move(pts));
  out.pairing.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.pairing.size(); ++i) out.pairing[i] = i;
  std::swap(out.pairing[1], out.pairing[2]);
  const auto check = verify_isometry(Correspondence(out.config, out.config, out.pairing));
  out.flip_defect = check.max_defect;
  if (out.flip_defect > 10.0 * tol.locus_tol * std::max(1.0, nf)) {
    throw NotAnIsometry("flip defect " + std::to_string(out.flip_defect));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strict convexity

struct StrictConvexityWitness {
  Vector a;
  Vector b;
  double defect = 0.0;        // | ||a + b|| - ||a|| - ||b|| |
  double independence = 0.0;  // smallest singular value of [a b]
};

/// Looks for unit a, b with ||a + b|| = 2 that are clearly independent. Among
/// qualifying pairs the most independent one is kept (ties: lexicographically
/// larger coordinates). Structured pairs are visited first.
inline std::optional<StrictConvexityWitness> strict_convexity_search(
    const NormedSpace& space, std::size_t budget, std::uint64_t seed,
    double defect_tol = 1e-9, double independence_min = 1e-3) {
  if (budget < 1) throw InvalidArgument("budget must be >= 1");
  const NormedSpace real = as_real(space);
  const auto units = structured_units(real);
  std::mt19937_64 rng(seed);
  std::optional<StrictConvexityWitness> best;
  auto lex_greater = [](const StrictConvexityWitness& x, const StrictConvexityWitness& y) {
    for (Index i = 0; i < x.a.size(); ++i)
      if (x.a[i] != y.a[i]) return x.a[i] > y.a[i];
    for (Index i = 0; i < x.b.size(); ++i)
      if (x.b[i] != y.b[i]) return x.b[i] > y.b[i];
    return false;
  };
  auto consider = [&](const Vector& a, const Vector& b) {
    const double defect = std::abs(real.norm_unchecked(a + b) - real.norm_unchecked(a) -
                                   real.norm_unchecked(b));
    if (defect > defect_tol) return;
    const double ind = detail::pair_independence(a, b);
    if (ind < independence_min) return;
    StrictConvexityWitness w{a, b, defect, ind};
    if (!best || w.independence > best->independence ||
        (w.independence == best->independence && lex_greater(w, *best))) {
      best = std::move(w);
    }
  };
  std::size_t used = 0;
  for (std::size_t i = 0; i < units.size() && used < budget; ++i)
    for (std::size_t j = i + 1; j < units.size() && used < budget; ++j, ++used)
      consider(units[i], units[j]);
  for (; used < budget; ++used) {
    const Vector a = random_unit(real, rng);
    const Vector b = random_unit(real, rng);
    consider(a, b);
  }
  return best;
}

}  // namespace ipspace
