#pragma once

namespace ipspace {

// Default numerical thresholds shared across modules. Everything is binary64;
// where a natural scale exists the threshold is applied relative to it.
struct Tolerances {
  double residual_tol = 1e-9;         // generic absolute default
  double rank_tol = 1e-9;             // Gram eigenvalue / pivot residual threshold (relative)
  double locus_tol = 1e-10;           // |phi(h)| bound for equidistant-locus points
  double violation_threshold = 1e-6;  // residual above which a witness is reported
  double hypothesis_tol = 1e-10;      // premise equalities (||f|| = ||g|| etc.)
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace ipspace
