#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "ipspace/characterizations.hpp"
#include "ipspace/linalg.hpp"
#include "ipspace/point_config.hpp"
#include "ipspace/polarization.hpp"
#include "ipspace/tolerances.hpp"

namespace ipspace {

/// A map T : Y -> Y' given by an index pairing: T(source[i]) = target[pairing[i]].
struct Correspondence {
  PointConfig source;
  PointConfig target;
  std::vector<std::size_t> pairing;

  Correspondence(PointConfig src, PointConfig dst, std::vector<std::size_t> pair = {})
      : source(std::move(src)), target(std::move(dst)), pairing(std::move(pair)) {
    if (source.size() != target.size()) {
      throw InvalidArgument("source and target have different sizes");
    }
    if (!(source.space == target.space)) {
      throw InvalidArgument("source and target live in different spaces");
    }
    if (pairing.empty()) {
      pairing.resize(source.size());
      std::iota(pairing.begin(), pairing.end(), std::size_t{0});
    }
    if (pairing.size() != source.size()) throw InvalidArgument("pairing has the wrong length");
    std::vector<bool> hit(pairing.size(), false);
    for (std::size_t p : pairing) {
      if (p >= pairing.size() || hit[p]) throw InvalidArgument("pairing is not a bijection");
      hit[p] = true;
    }
  }

  const NormedSpace& space() const { return source.space; }
  std::size_t size() const { return source.size(); }
  const Vector& image(std::size_t i) const { return target[pairing[i]]; }
};

struct IsometryCheck {
  bool is_isometry = false;
  double max_defect = 0.0;
  double tolerance = 0.0;
};

/// Compares every pairwise distance before and after the map.
inline IsometryCheck verify_isometry(const Correspondence& corr, double rel_tol = 1e-9) {
  const NormedSpace& space = corr.space();
  IsometryCheck out;
  double dmax = 0.0;
  for (std::size_t i = 0; i < corr.size(); ++i) {
    for (std::size_t j = i + 1; j < corr.size(); ++j) {
      const double a = space.norm_unchecked(corr.source[i] - corr.source[j]);
      const double b = space.norm_unchecked(corr.image(i) - corr.image(j));
      dmax = std::max({dmax, a, b});
      out.max_defect = std::max(out.max_defect, std::abs(a - b));
    }
  }
  out.tolerance = rel_tol * (1.0 + dmax);
  out.is_isometry = out.max_defect <= out.tolerance;
  return out;
}

/// x -> q (x + pre_translation) + post_translation. For quadratic-form norms
/// q is orthogonal for that form (q^T G q = G); for the standard Euclidean
/// norm it is an orthogonal matrix.
struct OrthogonalExtension {
  Matrix q;
  Vector pre_translation;
  Vector post_translation;
  double max_defect = 0.0;            // max_i ||q(y_i - y_0) - (T y_i - T y_0)||
  double orthogonality_defect = 0.0;  // max |Qz^T Qz - I|, Qz = q in Euclidean coordinates
  double coefficient_defect = 0.0;    // non-pivot points: ||sum c_j T y_j - T y||
  std::vector<std::size_t> pivots;    // source indices of the maximal independent subset

  Index rank() const { return static_cast<Index>(pivots.size()); }
  Vector apply(const Vector& x) const { return q * (x + pre_translation) + post_translation; }
};

/// Extends a finite isometry of a Euclidean (or quadratic-form) space to an
/// affine orthogonal map of the whole space.
///
/// Both sides are translated so the first source point and its image sit at
/// the origin. Polarization gives the Gram matrices, which must agree. A
/// pivoted Gram-Schmidt on the source Gram picks a maximal independent
/// subset; the linear map is fixed on it by mapping pivots to their images,
/// and on the orthogonal complements by pairing deterministic orthonormal
/// bases (standard basis vectors orthonormalized in index order).
inline OrthogonalExtension extend_isometry(const Correspondence& corr,
                                           const Tolerances& tol = kDefaultTolerances) {
  const NormedSpace& space = corr.space();
  if (space.field() != Field::Real) {
    throw InvalidArgument("extend_isometry works on real (or realified) spaces");
  }
  const Matrix& upper = space.euclidean_factor();  // ||x|| = |upper * x|_2
  const Index k = space.real_dim();
  const std::size_t n = corr.size();

  const IsometryCheck iso = verify_isometry(corr, tol.rank_tol);
  if (!iso.is_isometry) {
    throw NotAnIsometry("pairwise distances differ by up to " + std::to_string(iso.max_defect));
  }

  OrthogonalExtension ext;
  ext.pre_translation = -corr.source[0];
  ext.post_translation = corr.image(0);

  std::vector<Vector> src(n), dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = corr.source[i] - corr.source[0];
    dst[i] = corr.image(i) - corr.image(0);
  }
  double reach = 0.0;
  for (const auto& s : src) reach = std::max(reach, space.norm_unchecked(s));

  // Gram matrices by polarization; an exact isometry preserves them.
  const GramMatrix gs = gram_matrix(space, src, 0);
  const GramMatrix gt = gram_matrix(space, dst, 0);
  if (gs.size() > 0) {
    const double mismatch = (gs.entries - gt.entries).cwiseAbs().maxCoeff();
    const double allowed = 4.0 * tol.rank_tol * reach * (1.0 + 2.0 * reach) + 1e-300;
    if (mismatch > allowed) {
      throw GramMismatch("Gram matrices differ by " + std::to_string(mismatch));
    }
  }

  const auto pc = linalg::pivoted_cholesky(gs.entries, tol.rank_tol);
  const Index r = static_cast<Index>(pc.pivots.size());
  for (Index p : pc.pivots) ext.pivots.push_back(gs.point_indices[static_cast<std::size_t>(p)]);

  Matrix basis_src(k, r), basis_dst(k, r);
  if (r > 0) {
    Matrix pivot_gram(r, r);
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < r; ++b) pivot_gram(a, b) = gs.entries(pc.pivots[a], pc.pivots[b]);
    const double cond = linalg::spd_condition(pivot_gram);
    if (!(cond <= 1e12)) {
      throw RankDeficiencyUnstable("pivot Gram condition number " + std::to_string(cond));
    }
    // Euclidean coordinates of the pivots and their images
    Matrix ys(k, r), yt(k, r);
    for (Index a = 0; a < r; ++a) {
      ys.col(a) = upper * src[ext.pivots[static_cast<std::size_t>(a)]];
      yt.col(a) = upper * dst[ext.pivots[static_cast<std::size_t>(a)]];
    }
    Eigen::HouseholderQR<Matrix> qr(ys);
    const Matrix thin_q = qr.householderQ() * Matrix::Identity(k, r);
    const Matrix rfac = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
    basis_src = thin_q;
    // same triangular factor on the image side: an isometry preserves it
    basis_dst = rfac.transpose().triangularView<Eigen::Lower>().solve(yt.transpose()).transpose();

    // Coefficients of every other point against the pivots must carry over.
    for (std::size_t i = 1; i < n; ++i) {
      if (std::find(ext.pivots.begin(), ext.pivots.end(), i) != ext.pivots.end()) continue;
      Vector rhs(r);
      for (Index a = 0; a < r; ++a) rhs[a] = gs.entries(pc.pivots[a], static_cast<Index>(i - 1));
      const Vector c = pivot_gram.ldlt().solve(rhs);
      Vector recon = Vector::Zero(k);
      for (Index a = 0; a < r; ++a) recon += c[a] * dst[ext.pivots[static_cast<std::size_t>(a)]];
      ext.coefficient_defect = std::max(ext.coefficient_defect, space.norm_unchecked(recon - dst[i]));
    }
  }

  const Matrix comp_src = linalg::complement_basis(basis_src, k, tol.rank_tol);
  const Matrix comp_dst = linalg::complement_basis(basis_dst, k, tol.rank_tol);
  if (comp_src.cols() != k - r || comp_dst.cols() != k - r) {
    throw RankDeficiencyUnstable("could not complete orthonormal complements");
  }
  const Matrix qz = basis_dst * basis_src.transpose() + comp_dst * comp_src.transpose();
  ext.orthogonality_defect = (qz.transpose() * qz - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  // back to the original coordinates: q = upper^-1 qz upper
  ext.q = upper.triangularView<Eigen::Upper>().solve(qz * upper);

  for (std::size_t i = 0; i < n; ++i) {
    ext.max_defect = std::max(ext.max_defect, space.norm_unchecked(ext.q * src[i] - dst[i]));
  }
  if (ext.max_defect > 1e-8 * (1.0 + reach)) {
    throw GramMismatch("extension misses a point by " + std::to_string(ext.max_defect));
  }
  return ext;
}

struct ComplexLinearity {
  double commutator = 0.0;      // max |QJ - JQ|, zero for C-linear maps
  double anticommutator = 0.0;  // max |QJ + JQ|, zero for C-antilinear maps

  bool is_complex_linear(double tol = 1e-9) const { return commutator <= tol; }
};

inline ComplexLinearity check_complex_linearity(const Matrix& q, const ComplexStructure& j) {
  if (q.rows() != j.j.rows() || q.cols() != j.j.cols()) {
    throw DimensionMismatch("map and complex structure have different sizes");
  }
  return {(q * j.j - j.j * q).cwiseAbs().maxCoeff(), (q * j.j + j.j * q).cwiseAbs().maxCoeff()};
}

inline ComplexLinearity check_complex_linearity(const OrthogonalExtension& ext,
                                                const ComplexStructure& j) {
  return check_complex_linearity(ext.q, j);
}

// ---------------------------------------------------------------------------
// Non-extendability certificate

/// A flip of an isosceles triangle {0, f', g'} that no onto isometry of the
/// space can extend.
struct FlipCertificate {
  double gamma = 2.0;
  Vector f;
  Vector g;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double lhs = 0.0;  // ||f' + gamma g'||
  double rhs = 0.0;  // ||g' + gamma f'||
  double residual = 0.0;
  double flip_defect = 0.0;  // distance defect of the flip on the triangle
  std::vector<Vector> triangle;
  std::vector<std::size_t> pairing{0, 2, 1};
  std::vector<std::string> argument;
};

inline std::vector<std::string> flip_argument(double gamma, double lhs, double rhs) {
  auto num = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  return {
      "the flip fixing 0 and swapping f', g' is an isometry of {0, f', g'} because ||f'|| = ||g'||",
      "an onto isometric extension fixing 0 is linear over the reals (Mazur-Ulam)",
      "a linear extension maps f' + gamma g' to g' + gamma f' with gamma = " + num(gamma) +
          ", so both must have equal norm",
      "measured ||f' + gamma g'|| = " + num(lhs) + " and ||g' + gamma f'|| = " + num(rhs) +
          ", so no onto isometric extension exists"};
}

/// Searches for an isosceles triangle whose flip cannot extend. Returns
/// nullopt for spaces whose norm comes from an inner product, and when the
/// search finds no IP5 violation.
inline std::optional<FlipCertificate> certify_nonextendable_flip(
    const NormedSpace& space, double gamma, std::size_t budget, std::uint64_t seed,
    const Tolerances& tol = kDefaultTolerances) {
  ConditionId cond = ConditionId::make(Condition::IP5);
  cond.gamma = gamma;
  cond.validate();
  if (space.is_euclidean()) return std::nullopt;
  const NormedSpace real = as_real(space);
  auto w = search_violation(real, cond, budget, seed, tol);
  if (!w) return std::nullopt;
  FlipCertificate cert;
  cert.gamma = gamma;
  cert.f = w->vectors[0];
  cert.g = w->vectors[1];
  cert.norm_f = real.norm_unchecked(cert.f);
  cert.norm_g = real.norm_unchecked(cert.g);
  cert.lhs = real.norm_unchecked(cert.f + gamma * cert.g);
  cert.rhs = real.norm_unchecked(cert.g + gamma * cert.f);
  cert.residual = w->residual;
  cert.triangle = {Vector::Zero(real.real_dim()), cert.f, cert.g};
  Correspondence flip(PointConfig(real, cert.triangle), PointConfig(real, cert.triangle),
                      cert.pairing);
  cert.flip_defect = verify_isometry(flip).max_defect;
  cert.argument = flip_argument(gamma, cert.lhs, cert.rhs);
  return cert;
}

}  // namespace ipspace
