#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ipspace/errors.hpp"

namespace ipspace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class Field { Real, Complex };

/// ell^p norm with finite p >= 1. The p = infinity case is `SupNorm`.
struct PNorm {
  double p = 2.0;
};

/// (sum_k w_k |x_k|^p)^(1/p), one positive weight per (complex) coordinate.
struct WeightedPNorm {
  double p = 2.0;
  std::vector<double> weights;
};

struct SupNorm {};

/// sqrt(x^T Q x) for symmetric positive-definite Q. On a complex space the
/// real symmetric Q acts as z^* Q z = Re^T Q Re + Im^T Q Im.
struct QuadraticForm {
  Matrix q;
};

using NormKind = std::variant<PNorm, WeightedPNorm, SupNorm, QuadraticForm>;

inline std::string kind_name(const NormKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PNorm>) return "p";
        if constexpr (std::is_same_v<K, WeightedPNorm>) return "weighted_p";
        if constexpr (std::is_same_v<K, SupNorm>) return "sup";
        if constexpr (std::is_same_v<K, QuadraticForm>) return "quadratic";
      },
      kind);
}

/// A finite-dimensional real or complex normed space with an evaluable norm.
///
/// Vectors are stored in real coordinates. A complex coordinate z_k occupies
/// the interleaved pair (Re z_k, Im z_k), so a complex space of dimension k
/// has real dimension 2k and realification leaves storage untouched. A
/// realified space is a Real space whose coordinates are still grouped in
/// (Re, Im) pairs for the purpose of evaluating moduli.
class NormedSpace {
public:
  NormedSpace(Field field, Index dim, NormKind kind)
      : NormedSpace(field, dim, std::move(kind), field == Field::Complex) {}

  static NormedSpace real(Index dim, NormKind kind) {
    return NormedSpace(Field::Real, dim, std::move(kind));
  }
  static NormedSpace complex(Index dim, NormKind kind) {
    return NormedSpace(Field::Complex, dim, std::move(kind));
  }

  Field field() const noexcept { return field_; }
  /// Dimension over the field.
  Index dim() const noexcept { return dim_; }
  Index real_dim() const noexcept { return groups_ * group_size(); }
  /// Number of coordinate moduli the norm is built from.
  Index groups() const noexcept { return groups_; }
  /// True when coordinates come in (Re, Im) pairs.
  bool paired() const noexcept { return paired_; }
  const NormKind& kind() const noexcept { return kind_; }

  /// True when the norm is induced by an inner product by construction.
  bool is_euclidean() const noexcept { return form_.size() != 0; }

  /// Real symmetric positive-definite matrix G with ||x||^2 = x^T G x, in real
  /// coordinates. Only defined for Euclidean kinds.
  const Matrix& euclidean_form() const {
    if (form_.size() == 0) {
      throw NotEuclideanSpace("norm kind '" + kind_name(kind_) +
                              "' is not induced by an inner product");
    }
    return form_;
  }

  /// Upper factor U with G = U^T U, so ||x|| = |U x|_2.
  const Matrix& euclidean_factor() const {
    euclidean_form();
    return factor_;
  }

  void check(const Vector& v) const {
    if (v.size() != real_dim()) {
      throw DimensionMismatch("vector has " + std::to_string(v.size()) +
                              " coordinates, space expects " +
                              std::to_string(real_dim()));
    }
    if (!v.allFinite()) throw NonFiniteInput("vector has non-finite entries");
  }

  double norm(const Vector& v) const {
    check(v);
    return norm_unchecked(v);
  }

  /// Norm without validation; callers guarantee size and finiteness.
  double norm_unchecked(const Vector& v) const {
    return std::visit([&](const auto& k) { return eval(k, v); }, kind_);
  }

  /// ||v||^2. Euclidean kinds skip the square root, so integer data such as
  /// ||(2, 1)||^2 = 5 come out exact.
  double squared_norm_unchecked(const Vector& v) const {
    if (const auto* pn = std::get_if<PNorm>(&kind_); pn && pn->p == 2.0) return v.squaredNorm();
    if (const auto* wp = std::get_if<WeightedPNorm>(&kind_); wp && wp->p == 2.0) {
      double s = 0.0;
      for (Index i = 0; i < v.size(); ++i) s += wp->weights[i / group_size()] * v[i] * v[i];
      return s;
    }
    if (std::holds_alternative<QuadraticForm>(kind_)) return (factor_ * v).squaredNorm();
    const double n = norm_unchecked(v);
    return n * n;
  }

  double squared_norm(const Vector& v) const {
    check(v);
    return squared_norm_unchecked(v);
  }

  /// The same space viewed over the reals, with twice the dimension.
  NormedSpace realified() const {
    if (field_ != Field::Complex) {
      throw NotComplexSpace("realify requires a complex space");
    }
    return NormedSpace(Field::Real, 2 * dim_, kind_, true);
  }

  bool operator==(const NormedSpace& o) const {
    if (field_ != o.field_ || dim_ != o.dim_ || paired_ != o.paired_) return false;
    if (kind_.index() != o.kind_.index()) return false;
    return std::visit(
        [&](const auto& a) {
          using K = std::decay_t<decltype(a)>;
          const auto& b = std::get<K>(o.kind_);
          if constexpr (std::is_same_v<K, PNorm>) return a.p == b.p;
          if constexpr (std::is_same_v<K, WeightedPNorm>)
            return a.p == b.p && a.weights == b.weights;
          if constexpr (std::is_same_v<K, SupNorm>) return true;
          if constexpr (std::is_same_v<K, QuadraticForm>) return a.q == b.q;
        },
        kind_);
  }

private:
  NormedSpace(Field field, Index dim, NormKind kind, bool paired)
      : field_(field), dim_(dim), kind_(std::move(kind)), paired_(paired) {
    if (dim_ < 1) throw InvalidSpace("dimension must be positive");
    if (paired_ && field_ == Field::Real && dim_ % 2 != 0) {
      throw InvalidSpace("paired real space must have even dimension");
    }
    groups_ = (field_ == Field::Complex) ? dim_ : (paired_ ? dim_ / 2 : dim_);
    std::visit([&](const auto& k) { validate(k); }, kind_);
    build_form();
  }

  Index group_size() const noexcept { return paired_ ? 2 : 1; }

  double modulus(const Vector& v, Index g) const {
    return paired_ ? std::hypot(v[2 * g], v[2 * g + 1]) : std::abs(v[g]);
  }

  static void validate_p(double p) {
    if (!std::isfinite(p) || p < 1.0) {
      throw InvalidSpace("p must be finite and >= 1 (use the sup kind for p = inf)");
    }
  }

  void validate(const PNorm& k) const { validate_p(k.p); }

  void validate(const WeightedPNorm& k) const {
    validate_p(k.p);
    if (static_cast<Index>(k.weights.size()) != groups_) {
      throw InvalidSpace("expected " + std::to_string(groups_) + " weights");
    }
    for (double w : k.weights) {
      if (!std::isfinite(w) || w <= 0.0) throw InvalidSpace("weights must be positive");
    }
  }

  void validate(const SupNorm&) const {}

  void validate(const QuadraticForm& k) const {
    const Matrix& q = k.q;
    if (q.rows() != groups_ || q.cols() != groups_) {
      throw InvalidSpace("quadratic form must be " + std::to_string(groups_) + "x" +
                         std::to_string(groups_));
    }
    if (!q.allFinite()) throw InvalidSpace("quadratic form has non-finite entries");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidSpace("quadratic form is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(q, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmax > 0.0) || es.eigenvalues().minCoeff() <= 1e-10 * lmax) {
      throw InvalidSpace("quadratic form is not positive definite");
    }
  }

  void build_form() {
    const Index n = real_dim();
    Matrix g;
    if (const auto* pn = std::get_if<PNorm>(&kind_); pn && pn->p == 2.0) {
      g = Matrix::Identity(n, n);
    } else if (const auto* wp = std::get_if<WeightedPNorm>(&kind_); wp && wp->p == 2.0) {
      g = Matrix::Zero(n, n);
      for (Index i = 0; i < n; ++i) g(i, i) = wp->weights[i / group_size()];
    } else if (const auto* qf = std::get_if<QuadraticForm>(&kind_)) {
      g = Matrix::Zero(n, n);
      const Index s = group_size();
      for (Index a = 0; a < groups_; ++a)
        for (Index b = 0; b < groups_; ++b)
          for (Index c = 0; c < s; ++c) g(s * a + c, s * b + c) = qf->q(a, b);
      g = 0.5 * (g + g.transpose());
    } else {
      return;
    }
    form_ = g;
    Eigen::LLT<Matrix> llt(form_);
    factor_ = llt.matrixU();
  }

  double eval(const PNorm& k, const Vector& v) const {
    return weighted_p(k.p, nullptr, v);
  }

  double eval(const WeightedPNorm& k, const Vector& v) const {
    return weighted_p(k.p, &k.weights, v);
  }

  double eval(const SupNorm&, const Vector& v) const {
    double m = 0.0;
    for (Index g = 0; g < groups_; ++g) m = std::max(m, modulus(v, g));
    return m;
  }

  double eval(const QuadraticForm&, const Vector& v) const {
    return (factor_ * v).norm();
  }

  double weighted_p(double p, const std::vector<double>* w, const Vector& v) const {
    if (p == 1.0) {
      double s = 0.0;
      for (Index g = 0; g < groups_; ++g) s += (w ? (*w)[g] : 1.0) * modulus(v, g);
      return s;
    }
    double big = 0.0;
    for (Index g = 0; g < groups_; ++g) big = std::max(big, modulus(v, g));
    if (big == 0.0) return 0.0;
    double s = 0.0;
    for (Index g = 0; g < groups_; ++g) {
      const double r = modulus(v, g) / big;
      const double term = (p == 2.0) ? r * r : std::pow(r, p);
      s += (w ? (*w)[g] : 1.0) * term;
    }
    return big * ((p == 2.0) ? std::sqrt(s) : std::pow(s, 1.0 / p));
  }

  Field field_;
  Index dim_;
  NormKind kind_;
  bool paired_;
  Index groups_ = 0;
  Matrix form_;
  Matrix factor_;
};

/// Multiplication by i on realified coordinates: block-diagonal with
/// [[0, -1], [1, 0]] per complex coordinate, so J (1, 0) = (0, 1).
struct ComplexStructure {
  Matrix j;

  static ComplexStructure for_dim(Index complex_dim) {
    Matrix m = Matrix::Zero(2 * complex_dim, 2 * complex_dim);
    for (Index k = 0; k < complex_dim; ++k) {
      m(2 * k + 1, 2 * k) = 1.0;
      m(2 * k, 2 * k + 1) = -1.0;
    }
    return {m};
  }

  Vector apply(const Vector& v) const { return j * v; }
};

struct Realification {
  NormedSpace space;
  ComplexStructure j;
};

inline Realification realify(const NormedSpace& space) {
  NormedSpace real = space.realified();
  return {std::move(real), ComplexStructure::for_dim(space.dim())};
}

/// Complex structure of a realified (paired) or complex space.
inline ComplexStructure complex_structure(const NormedSpace& space) {
  if (!space.paired()) throw NotComplexSpace("space has no complex structure");
  return ComplexStructure::for_dim(space.groups());
}

/// Real-coordinate view of a space: complex spaces are realified, real
/// spaces returned unchanged.
inline NormedSpace as_real(const NormedSpace& space) {
  return space.field() == Field::Complex ? space.realified() : space;
}

// ---------------------------------------------------------------------------
// Sampling

/// Directions every search visits first: +e_i, -e_i, then (+-e_i +- e_j) for
/// i < j. Polytope norms attain their extreme behaviour on these.
inline std::vector<Vector> structured_directions(Index n) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(2 * n + 2 * n * (n - 1)));
  for (double s : {1.0, -1.0}) {
    for (Index i = 0; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e[i] = s;
      out.push_back(std::move(e));
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
        Vector e = Vector::Zero(n);
        e[i] = a;
        e[j] = b;
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

inline Vector normalized(const NormedSpace& space, const Vector& v) {
  return v / space.norm_unchecked(v);
}

template <class Rng>
Vector random_direction(Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  do {
    for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  } while (v.squaredNorm() < 1e-12);
  return v;
}

template <class Rng>
Vector random_unit(const NormedSpace& space, Rng& rng) {
  return normalized(space, random_direction(space.real_dim(), rng));
}

/// Unit-norm structured directions of the space, in the fixed order above.
inline std::vector<Vector> structured_units(const NormedSpace& space) {
  auto dirs = structured_directions(space.real_dim());
  for (auto& d : dirs) d = normalized(space, d);
  return dirs;
}

/// Deterministic unit vectors: structured directions first, then seeded
/// Gaussian directions rescaled to unit norm.
inline std::vector<Vector> sample_unit_vectors(const NormedSpace& space, std::size_t count,
                                               std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("count must be >= 1");
  std::vector<Vector> out = structured_units(space);
  if (out.size() >= count) {
    out.resize(count);
    return out;
  }
  std::mt19937_64 rng(seed);
  while (out.size() < count) out.push_back(random_unit(space, rng));
  return out;
}

}  // namespace ipspace
