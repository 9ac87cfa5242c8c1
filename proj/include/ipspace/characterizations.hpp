#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipspace/polarization.hpp"
#include "ipspace/spaces.hpp"
#include "ipspace/tolerances.hpp"

namespace ipspace {

// Conditions that hold in a normed space exactly when its norm comes from an
// inner product. IP6 doubles as I1 and IP5 as I1'.
enum class Condition { IP1, IP2, IP3, IP4, IP5, IP6, I2, I3, I4, I5, I6 };

inline constexpr std::array<Condition, 11> kAllConditions{
    Condition::IP1, Condition::IP2, Condition::IP3, Condition::IP4,
    Condition::IP5, Condition::IP6, Condition::I2,  Condition::I3,
    Condition::I4,  Condition::I5,  Condition::I6};

inline std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::IP1: return "IP1";
    case Condition::IP2: return "IP2";
    case Condition::IP3: return "IP3";
    case Condition::IP4: return "IP4";
    case Condition::IP5: return "IP5";
    case Condition::IP6: return "IP6";
    case Condition::I2: return "I2";
    case Condition::I3: return "I3";
    case Condition::I4: return "I4";
    case Condition::I5: return "I5";
    case Condition::I6: return "I6";
  }
  return "?";
}

inline std::optional<Condition> condition_from_string(std::string_view s) {
  for (Condition c : kAllConditions)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

/// How a witness's residual scales under v -> c v.
inline int residual_degree(Condition c) {
  switch (c) {
    case Condition::IP1:
    case Condition::IP3:
    case Condition::I4:
    case Condition::I6: return 2;
    default: return 1;
  }
}

/// 33 log-spaced points in [1/8, 8].
inline std::vector<double> default_alpha_grid() {
  std::vector<double> g(33);
  for (int i = 0; i < 33; ++i) g[static_cast<std::size_t>(i)] = std::exp2(-3.0 + 6.0 * i / 32.0);
  return g;
}

struct ConditionId {
  Condition tag = Condition::IP1;
  double gamma = 2.0;  // gamma' for IP5, gamma for IP6
  std::vector<std::pair<double, double>> ab_grid{{1, 2}, {1, 3}, {2, 3}};  // IP2
  std::vector<double> alpha_grid = default_alpha_grid();                   // I5
  int n = 4;                                                               // I6

  static ConditionId make(Condition c) {
    ConditionId id;
    id.tag = c;
    return id;
  }

  void validate() const {
    if (tag == Condition::IP5 || tag == Condition::IP6) {
      if (!std::isfinite(gamma) || gamma == 0.0 || std::abs(gamma) == 1.0) {
        throw InvalidParameters("gamma must be a finite real outside {0, 1, -1}");
      }
    }
    if (tag == Condition::IP2 && ab_grid.empty()) {
      throw InvalidParameters("IP2 needs a non-empty (alpha, beta) grid");
    }
    if (tag == Condition::I5) {
      if (alpha_grid.empty()) throw InvalidParameters("I5 needs a non-empty alpha grid");
      for (double a : alpha_grid)
        if (!std::isfinite(a) || a == 0.0) throw InvalidParameters("I5 alpha must be nonzero");
    }
    if (tag == Condition::I6 && n < 3) throw InvalidParameters("I6 requires n >= 3");
  }
};

struct Witness {
  ConditionId condition;
  std::vector<Vector> vectors;
  std::vector<double> scalars;
  double residual = 0.0;
  double signed_value = 0.0;
};

/// Result of evaluating one condition on concrete inputs.
struct Evaluation {
  double residual = 0.0;
  double signed_value = 0.0;
  std::vector<double> scalars;  // the scalars that produced the residual
};

// ---------------------------------------------------------------------------
// Birkhoff-James orthogonality

struct BjGap {
  double gap = 0.0;          // max(0, ||f|| - min_alpha ||f + alpha g||)
  double min_value = 0.0;    // min_alpha ||f + alpha g||
  double argmin_alpha = 0.0;
};

/// Minimizes the convex function alpha -> ||f + alpha g|| over a 65-point grid
/// on [-8, 8] * ||f|| / ||g|| (which always contains a minimizer) refined by
/// golden-section search down to a 1e-10 relative interval. Euclidean kinds
/// use the exact projection instead.
inline BjGap bj_gap_detail(const NormedSpace& space, const Vector& f, const Vector& g,
                           int grid_points = 65, double half_width = 8.0) {
  space.check(f);
  space.check(g);
  const double nf = space.norm_unchecked(f);
  const double ng = space.norm_unchecked(g);
  if (nf == 0.0 || ng == 0.0) throw InvalidArgument("Birkhoff-James gap needs nonzero vectors");
  if (space.is_euclidean()) {
    // closed form: the minimizer is the orthogonal projection coefficient
    const Matrix& u = space.euclidean_factor();
    const Vector uf = u * f, ug = u * g;
    const double a = -uf.dot(ug) / ug.squaredNorm();
    const double m = (uf + a * ug).norm();
    return {std::max(0.0, nf - m), m, a};
  }
  const double range = half_width * nf / ng;
  Vector buf(f.size());
  auto val = [&](double a) {
    buf.noalias() = f + a * g;
    return space.norm_unchecked(buf);
  };
  const double step = 2.0 * range / (grid_points - 1);
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double a = -range + k * step;
    const double v = (2 * k == grid_points - 1) ? nf : val(a);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = -range + std::max(best - 1, 0) * step;
  double hi = -range + std::min(best + 1, grid_points - 1) * step;
  double best_a = -range + best * step;
  if (2 * best == grid_points - 1) best_a = 0.0;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double v1 = val(x1), v2 = val(x2);
  const double stop = 1e-10 * std::max(1.0, range);
  while (hi - lo > stop) {
    if (v1 <= v2) {
      hi = x2;
      x2 = x1;
      v2 = v1;
      x1 = hi - invphi * (hi - lo);
      v1 = val(x1);
    } else {
      lo = x1;
      x1 = x2;
      v1 = v2;
      x2 = lo + invphi * (hi - lo);
      v2 = val(x2);
    }
  }
  if (v1 < best_val) {
    best_val = v1;
    best_a = x1;
  }
  if (v2 < best_val) {
    best_val = v2;
    best_a = x2;
  }
  return {std::max(0.0, nf - best_val), best_val, best_a};
}

/// max(0, ||f|| - min_alpha ||f + alpha g||); zero means f is Birkhoff-James
/// orthogonal to g.
inline double bj_orthogonality_gap(const NormedSpace& space, const Vector& f, const Vector& g) {
  return bj_gap_detail(space, f, g).gap;
}

// ---------------------------------------------------------------------------
// Condition evaluation

namespace detail {

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline void require(bool ok, Condition c, const std::string& what) {
  if (!ok) throw HypothesisViolated(std::string(to_string(c)) + ": " + what);
}

inline void require_count(const std::vector<Vector>& v, std::size_t n, Condition c) {
  if (v.size() != n) {
    throw InvalidParameters(std::string(to_string(c)) + " expects " + std::to_string(n) +
                            " witness vectors, got " + std::to_string(v.size()));
  }
}

inline Vector sum_of(const std::vector<Vector>& v) {
  Vector s = Vector::Zero(v.front().size());
  for (const auto& x : v) s += x;
  return s;
}

inline bool sums_to_zero(const NormedSpace& space, const std::vector<Vector>& v, double tol) {
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, space.norm_unchecked(x));
  return space.norm_unchecked(sum_of(v)) <= tol * std::max(scale, 1e-300);
}

// IP4 premise: one of the two directions is orthogonal, measured relative to
// the vector norms. The golden-section minimizer is accurate to ~1e-10 in
// alpha, so the premise is checked at 1e-9.
inline constexpr double kBjPremiseTol = 1e-9;

}  // namespace detail

/// Both sides of the I6 identity for a configuration summing to zero.
struct I6Sums {
  double pair_sum = 0.0;   // sum_{i<j} ||f_i - f_j||^2
  double norm_sum = 0.0;   // sum_i ||f_i||^2
  int implemented_constant = 0;  // n
  int printed_constant = 0;      // 2n, the classical statement's form
};

inline I6Sums i6_sums(const NormedSpace& space, const std::vector<Vector>& f) {
  I6Sums s;
  const int n = static_cast<int>(f.size());
  for (int i = 0; i < n; ++i) {
    s.norm_sum += space.squared_norm_unchecked(f[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j)
      s.pair_sum += space.squared_norm_unchecked(f[static_cast<std::size_t>(i)] -
                                                 f[static_cast<std::size_t>(j)]);
  }
  s.implemented_constant = n;
  s.printed_constant = 2 * n;
  return s;
}

/// Evaluates `cond` on a witness. Scalars: IP2 takes (alpha, beta), I5 takes
/// alpha, IP5/IP6 take gamma; when omitted, IP2/I5 maximize over their grid
/// and IP5/IP6 use cond.gamma. Throws HypothesisViolated when the inputs do not
/// satisfy the condition's premise within tol.hypothesis_tol.
inline Evaluation evaluate_condition(const NormedSpace& space, const ConditionId& cond,
                                     const std::vector<Vector>& v,
                                     const std::vector<double>& scalars = {},
                                     const Tolerances& tol = kDefaultTolerances) {
  using detail::nearly_equal;
  using detail::require;
  cond.validate();
  for (const auto& x : v) space.check(x);
  for (double s : scalars)
    if (!std::isfinite(s)) throw NonFiniteInput("non-finite witness scalar");
  const double htol = tol.hypothesis_tol;
  auto N = [&](const Vector& x) { return space.norm_unchecked(x); };
  auto N2 = [&](const Vector& x) { return space.squared_norm_unchecked(x); };
  const Condition c = cond.tag;
  Evaluation e;

  switch (c) {
    case Condition::IP1: {
      detail::require_count(v, 2, c);
      e.signed_value = parallelogram_residual(space, v[0], v[1]);
      break;
    }
    case Condition::IP2: {
      detail::require_count(v, 2, c);
      require(nearly_equal(N(v[0]), N(v[1]), htol), c, "needs ||f|| = ||g||");
      std::vector<std::pair<double, double>> grid = cond.ab_grid;
      if (!scalars.empty()) {
        if (scalars.size() != 2) throw InvalidParameters("IP2 takes (alpha, beta)");
        grid = {{scalars[0], scalars[1]}};
      }
      double best = -1.0;
      for (auto [a, b] : grid) {
        const double s = N(a * v[0] + b * v[1]) - N(b * v[0] + a * v[1]);
        if (std::abs(s) > best) {
          best = std::abs(s);
          e.signed_value = s;
          e.scalars = {a, b};
        }
      }
      break;
    }
    case Condition::IP3: {
      detail::require_count(v, 2, c);
      require(std::abs(N(v[0]) - 1.0) <= htol && std::abs(N(v[1]) - 1.0) <= htol, c,
              "needs ||f|| = ||g|| = 1");
      e.signed_value = N2(v[0] + v[1]) + N2(v[0] - v[1]) - 4.0;
      break;
    }
    case Condition::IP4: {
      detail::require_count(v, 2, c);
      const double nf = N(v[0]), ng = N(v[1]);
      require(nf > 0.0 && ng > 0.0, c, "needs nonzero f and g");
      const double gfg = bj_gap_detail(space, v[0], v[1]).gap;
      const double ggf = bj_gap_detail(space, v[1], v[0]).gap;
      require(std::min(gfg / nf, ggf / ng) <= detail::kBjPremiseTol, c,
              "needs f orthogonal to g or g orthogonal to f");
      // positive when f is orthogonal to g but not conversely
      e.signed_value = ggf - gfg;
      break;
    }
    case Condition::IP5: {
      detail::require_count(v, 2, c);
      require(nearly_equal(N(v[0]), N(v[1]), htol), c, "needs ||f'|| = ||g'||");
      const double g = scalars.empty() ? cond.gamma : scalars.at(0);
      e.scalars = {g};
      e.signed_value = N(v[0] + g * v[1]) - N(v[1] + g * v[0]);
      break;
    }
    case Condition::IP6: {
      detail::require_count(v, 2, c);
      require(nearly_equal(N(v[0] + v[1]), N(v[0] - v[1]), htol), c,
              "needs ||f + g|| = ||f - g||");
      const double g = scalars.empty() ? cond.gamma : scalars.at(0);
      e.scalars = {g};
      e.signed_value = N(v[0] + g * v[1]) - N(v[0] - g * v[1]);
      break;
    }
    case Condition::I2: {
      detail::require_count(v, 3, c);
      require(detail::sums_to_zero(space, v, htol), c, "needs f + g + h = 0");
      require(nearly_equal(N(v[0]), N(v[1]), htol), c, "needs ||f|| = ||g||");
      e.signed_value = N(v[0] - v[2]) - N(v[1] - v[2]);
      break;
    }
    case Condition::I3: {
      detail::require_count(v, 4, c);
      require(detail::sums_to_zero(space, v, htol), c, "needs f + g + h + k = 0");
      require(nearly_equal(N(v[0]), N(v[1]), htol), c, "needs ||f|| = ||g||");
      require(nearly_equal(N(v[2]), N(v[3]), htol), c, "needs ||h|| = ||k||");
      const double a = N(v[0] - v[2]) - N(v[1] - v[3]);
      const double b = N(v[1] - v[2]) - N(v[0] - v[3]);
      e.signed_value = std::abs(a) >= std::abs(b) ? a : b;
      break;
    }
    case Condition::I4: {
      detail::require_count(v, 4, c);
      auto phi = [&](const Vector& g) {
        const Vector s = v[0] + v[1], d = v[0] - v[1];
        return N2(s + g) + N2(s - g) - N2(d - g) - N2(d + g);
      };
      e.signed_value = phi(v[2]) - phi(v[3]);
      break;
    }
    case Condition::I5: {
      detail::require_count(v, 2, c);
      require(nearly_equal(N(v[0]), N(v[1]), htol), c, "needs ||f|| = ||g||");
      std::vector<double> grid = cond.alpha_grid;
      if (!scalars.empty()) {
        if (scalars.size() != 1 || scalars[0] == 0.0)
          throw InvalidParameters("I5 takes one nonzero alpha");
        grid = {scalars[0]};
      }
      const double base = N(v[0] + v[1]);
      double best = -std::numeric_limits<double>::infinity();
      for (double a : grid) {
        const double s = base - N(a * v[0] + v[1] / a);
        if (s > best) {
          best = s;
          e.scalars = {a};
        }
      }
      e.signed_value = best;
      e.residual = std::max(0.0, best);
      return e;
    }
    case Condition::I6: {
      detail::require_count(v, static_cast<std::size_t>(cond.n), c);
      require(detail::sums_to_zero(space, v, htol), c, "needs f_1 + ... + f_n = 0");
      const I6Sums s = i6_sums(space, v);
      e.signed_value = s.pair_sum - s.implemented_constant * s.norm_sum;
      break;
    }
  }
  e.residual = std::abs(e.signed_value);
  return e;
}

inline double eval_condition(const NormedSpace& space, const ConditionId& cond,
                             const std::vector<Vector>& vectors,
                             const std::vector<double>& scalars = {},
                             const Tolerances& tol = kDefaultTolerances) {
  return evaluate_condition(space, cond, vectors, scalars, tol).residual;
}

// ---------------------------------------------------------------------------
// Violator search

/// Moves g along d until ||f + g|| = ||f - g||, bisecting on t for
/// psi(t) = ||f + g + t d|| - ||f - g - t d||. Falls back to d = f, along
/// which psi always changes sign. Returns nullopt when no premise-satisfying
/// point is reached within `steps` bisections.
inline std::optional<Vector> project_equal_diagonals(const NormedSpace& space, const Vector& f,
                                                     const Vector& g, const Vector& d,
                                                     double htol = 1e-10, int steps = 80) {
  Vector plus(f.size()), minus(f.size());
  auto psi_at = [&](const Vector& dir, double t) {
    plus.noalias() = f + g + t * dir;
    minus.noalias() = f - g - t * dir;
    return space.norm_unchecked(plus) - space.norm_unchecked(minus);
  };
  auto accept = [&](const Vector& h) {
    return detail::nearly_equal(space.norm_unchecked(f + h), space.norm_unchecked(f - h), htol);
  };
  if (accept(g)) return g;
  const double nf = space.norm_unchecked(f);
  if (nf == 0.0) return g;  // premise holds trivially for f = 0
  for (const Vector* dir : {&d, &f}) {
    const double nd = space.norm_unchecked(*dir);
    if (nd == 0.0) continue;
    double reach = 2.0 * (nf + space.norm_unchecked(g)) / nd + 1.0;
    double lo = -reach, hi = reach;
    double plo = psi_at(*dir, lo), phi = psi_at(*dir, hi);
    for (int grow = 0; grow < 4 && plo * phi > 0.0; ++grow) {
      reach *= 4.0;
      lo = -reach;
      hi = reach;
      plo = psi_at(*dir, lo);
      phi = psi_at(*dir, hi);
    }
    if (plo * phi > 0.0) continue;
    for (int k = 0; k < steps; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;  // interval exhausted at double precision
      const double pm = psi_at(*dir, mid);
      if (pm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((pm < 0.0) == (plo < 0.0)) {
        lo = mid;
        plo = pm;
      } else {
        hi = mid;
      }
    }
    for (double t : {0.5 * (lo + hi), lo, hi}) {
      Vector h = g + t * *dir;
      if (accept(h)) return h;
    }
  }
  return std::nullopt;
}

struct SearchOptions {
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  Tolerances tol{};
};

/// Best candidate seen by a search, whether or not it crosses the threshold.
struct SearchOutcome {
  std::optional<Witness> best;
  std::size_t samples_evaluated = 0;
  std::size_t candidates_attempted = 0;
};

namespace detail {

// Lexicographic order on the concatenated witness coordinates and scalars.
inline bool lex_greater(const Witness& a, const Witness& b) {
  const std::size_t nv = std::min(a.vectors.size(), b.vectors.size());
  for (std::size_t i = 0; i < nv; ++i) {
    const Index m = std::min(a.vectors[i].size(), b.vectors[i].size());
    for (Index k = 0; k < m; ++k) {
      if (a.vectors[i][k] != b.vectors[i][k]) return a.vectors[i][k] > b.vectors[i][k];
    }
  }
  return std::lexicographical_compare(b.scalars.begin(), b.scalars.end(), a.scalars.begin(),
                                      a.scalars.end());
}

/// Reduction used by every search: keep the larger residual; on exact ties
/// keep the lexicographically larger witness. Independent of visiting order.
inline bool better(const Witness& cand, const std::optional<Witness>& cur) {
  if (!cur) return true;
  if (cand.residual != cur->residual) return cand.residual > cur->residual;
  return lex_greater(cand, *cur);
}

/// Supplies candidate vectors: ordered pairs of structured unit directions
/// first, then seeded random unit vectors.
class CandidateStream {
public:
  CandidateStream(const NormedSpace& space, std::uint64_t seed)
      : space_(space), units_(structured_units(space)), rng_(seed) {
    const std::size_t m = units_.size();
    structured_pairs_ = m > 1 ? m * (m - 1) : 0;
  }

  std::size_t structured_pairs() const { return structured_pairs_; }

  /// Candidate k: (a, b) plus `extra` further unit vectors. `scales` holds
  /// positive multipliers drawn for the random phase (1 in the structured
  /// phase).
  struct Candidate {
    std::vector<Vector> units;
    std::vector<double> scales;
    bool structured = false;
  };

  Candidate next(std::size_t k, std::size_t extra) {
    Candidate c;
    const std::size_t total = 2 + extra;
    c.scales.assign(total, 1.0);
    if (k < structured_pairs_) {
      const std::size_t m = units_.size();
      const std::size_t i = k / (m - 1);
      std::size_t j = k % (m - 1);
      if (j >= i) ++j;
      c.structured = true;
      c.units.push_back(units_[i]);
      c.units.push_back(units_[j]);
      for (std::size_t e = 0; e < extra; ++e) c.units.push_back(units_[(i + (e + 1) * (j + 1)) % m]);
      return c;
    }
    std::uniform_real_distribution<double> logscale(-2.0, 2.0);
    for (std::size_t e = 0; e < total; ++e) {
      c.units.push_back(random_unit(space_, rng_));
      c.scales[e] = std::exp2(logscale(rng_));
    }
    return c;
  }

  Vector random_direction() { return ipspace::random_direction(space_.real_dim(), rng_); }

private:
  const NormedSpace& space_;
  std::vector<Vector> units_;
  std::mt19937_64 rng_;
  std::size_t structured_pairs_ = 0;
};

/// Builds the premise-satisfying witness vectors for candidate k, or nullopt
/// when the construction degenerates.
inline std::optional<std::vector<Vector>> build_candidate(const NormedSpace& space,
                                                          const ConditionId& cond,
                                                          CandidateStream& stream,
                                                          std::size_t k, double htol) {
  using C = Condition;
  switch (cond.tag) {
    case C::IP1: {
      auto c = stream.next(k, 0);
      return std::vector<Vector>{c.units[0] * c.scales[0], c.units[1] * c.scales[1]};
    }
    case C::IP2:
    case C::IP3:
    case C::IP5:
    case C::I5: {
      auto c = stream.next(k, 0);
      return std::vector<Vector>{c.units[0], c.units[1]};
    }
    case C::IP4: {
      // g' = g + alpha* f minimizes the norm on the line through g, so g' is
      // orthogonal to f; IP4 then asks whether f is orthogonal to g'.
      auto c = stream.next(k, 0);
      const Vector& f = c.units[0];
      const BjGap m = bj_gap_detail(space, c.units[1], f);
      Vector g = c.units[1] + m.argmin_alpha * f;
      if (space.norm_unchecked(g) <= 1e-8) return std::nullopt;
      g /= space.norm_unchecked(g);
      return std::vector<Vector>{f, g};
    }
    case C::IP6: {
      auto c = stream.next(k, 0);
      const Vector f = c.units[0];
      const Vector g = c.units[1] * c.scales[1];
      const Vector d = c.structured ? f : stream.random_direction();
      auto h = project_equal_diagonals(space, f, g, d, htol);
      if (!h) return std::nullopt;
      return std::vector<Vector>{f, *h};
    }
    case C::I2: {
      auto c = stream.next(k, 0);
      return std::vector<Vector>{c.units[0], c.units[1], -(c.units[0] + c.units[1])};
    }
    case C::I3: {
      auto c = stream.next(k, 1);
      const Vector& f = c.units[0];
      const Vector& g = c.units[1];
      const Vector a = -0.5 * (f + g);
      const Vector v0 = c.units[2] * c.scales[2];
      std::optional<Vector> v = v0;
      if (space.norm_unchecked(a) > 1e-12) {
        const Vector d = c.structured ? a : stream.random_direction();
        v = project_equal_diagonals(space, a, v0, d, htol);
      }
      if (!v) return std::nullopt;
      return std::vector<Vector>{f, g, a + *v, a - *v};
    }
    case C::I4: {
      auto c = stream.next(k, 2);
      Vector ga = c.structured ? Vector::Zero(space.real_dim()) : Vector(c.units[2] * c.scales[2]);
      Vector gb = c.units[3] * (c.structured ? 2.0 : c.scales[3]);
      return std::vector<Vector>{c.units[0] * c.scales[0], c.units[1] * c.scales[1], ga, gb};
    }
    case C::I6: {
      const std::size_t n = static_cast<std::size_t>(cond.n);
      auto c = stream.next(k, n - 3);
      std::vector<Vector> v;
      Vector sum = Vector::Zero(space.real_dim());
      for (std::size_t i = 0; i + 1 < n; ++i) {
        v.push_back(c.units[i] * c.scales[i]);
        sum += v.back();
      }
      v.push_back(-sum);
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Seeded search over premise-satisfying candidates; reports the candidate
/// with the largest residual regardless of threshold.
inline SearchOutcome search_condition(const NormedSpace& space, const ConditionId& cond,
                                      const SearchOptions& opt) {
  cond.validate();
  if (opt.budget < 1) throw InvalidArgument("budget must be >= 1");
  SearchOutcome out;
  detail::CandidateStream stream(space, opt.seed);
  for (std::size_t k = 0; k < opt.budget; ++k) {
    ++out.candidates_attempted;
    auto vectors = detail::build_candidate(space, cond, stream, k, opt.tol.hypothesis_tol);
    if (!vectors) continue;
    Evaluation e;
    try {
      e = evaluate_condition(space, cond, *vectors, {}, opt.tol);
    } catch (const HypothesisViolated&) {
      continue;
    }
    ++out.samples_evaluated;
    Witness w{cond, std::move(*vectors), e.scalars, e.residual, e.signed_value};
    if (detail::better(w, out.best)) out.best = std::move(w);
  }
  return out;
}

/// The maximal-residual witness if it exceeds the violation threshold.
inline std::optional<Witness> search_violation(const NormedSpace& space, const ConditionId& cond,
                                               std::size_t budget, std::uint64_t seed,
                                               const Tolerances& tol = kDefaultTolerances) {
  auto out = search_condition(space, cond, {budget, seed, tol});
  if (out.best && out.best->residual > tol.violation_threshold) return out.best;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification

struct ConditionReport {
  ConditionId condition;
  double max_residual = 0.0;
  std::optional<Witness> witness;  // set when max_residual > violation threshold
  std::optional<Witness> best;     // maximal-residual candidate
  std::size_t samples_evaluated = 0;
  bool informative_only = false;   // IP4 in real dimension < 3
};

struct ComplexChecks {
  double conjugate_symmetry = 0.0;  // max |<f,g> - conj <g,f>|
  double i_linearity = 0.0;         // max |<if,g> - i <f,g>|
  std::size_t samples = 0;
};

struct ClassificationReport {
  bool inner_product_like = true;
  std::vector<ConditionReport> conditions;
  std::optional<ComplexChecks> complex_checks;
  std::size_t budget = 0;
  std::uint64_t seed = 0;

  const ConditionReport& at(Condition c) const {
    for (const auto& r : conditions)
      if (r.condition.tag == c) return r;
    throw InvalidArgument("condition not in report");
  }
  std::size_t violated_count() const {
    return static_cast<std::size_t>(
        std::count_if(conditions.begin(), conditions.end(), [](const auto& r) { return r.witness.has_value(); }));
  }
};

inline ComplexChecks complex_polarization_checks(const NormedSpace& space, std::size_t budget,
                                                 std::uint64_t seed) {
  const NormedSpace real = space.realified();
  const ComplexStructure j = complex_structure(real);
  ComplexChecks out;
  const auto units = sample_unit_vectors(real, std::max<std::size_t>(2, std::min<std::size_t>(budget, 256)), seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t pairs = std::min<std::size_t>(budget, 1000);
  for (std::size_t k = 0; k < pairs; ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
    const Vector& f = units[pick(rng)];
    const Vector& g = units[pick(rng)];
    const auto fg = polarize_complex(space, f, g).value();
    const auto gf = polarize_complex(space, g, f).value();
    const auto ifg = polarize_complex(space, j.apply(f), g).value();
    out.conjugate_symmetry = std::max(out.conjugate_symmetry, std::abs(fg - std::conj(gf)));
    out.i_linearity = std::max(out.i_linearity, std::abs(ifg - std::complex<double>(0, 1) * fg));
    ++out.samples;
  }
  return out;
}

/// Runs every condition with default parameters. Complex spaces are tested on
/// their realification with real constants, then checked for complex
/// polarization consistency.
inline ClassificationReport classify_space(const NormedSpace& space, std::size_t budget,
                                           std::uint64_t seed,
                                           const Tolerances& tol = kDefaultTolerances) {
  const NormedSpace real = as_real(space);
  ClassificationReport rep;
  rep.budget = budget;
  rep.seed = seed;
  for (Condition c : kAllConditions) {
    ConditionReport cr;
    cr.condition = ConditionId::make(c);
    auto out = search_condition(real, cr.condition, {budget, seed, tol});
    cr.samples_evaluated = out.samples_evaluated;
    if (out.best) {
      cr.max_residual = out.best->residual;
      if (out.best->residual > tol.violation_threshold) cr.witness = out.best;
      cr.best = std::move(out.best);
    }
    cr.informative_only = (c == Condition::IP4 && real.real_dim() < 3);
    if (cr.witness && !cr.informative_only) rep.inner_product_like = false;
    rep.conditions.push_back(std::move(cr));
  }
  if (space.field() == Field::Complex) {
    rep.complex_checks = complex_polarization_checks(space, budget, seed);
    if (rep.complex_checks->conjugate_symmetry > tol.violation_threshold ||
        rep.complex_checks->i_linearity > tol.violation_threshold) {
      rep.inner_product_like = false;
    }
  }
  return rep;
}

}  // namespace ipspace
