#pragma once

#include <algorithm>
#include <optional>

#include "qkd/types.hpp"

namespace qkd::detail {

// The two reductions every closed-form rate is built from, taken over the
// squared overlaps A(i,k) = |<e_i|g_k>|^2 and B(i,k) = |<f_i|g_k>|^2:
// `quartic` is sum(A^2 + B^2), `combined_sq` is sum((A + B)^2).
struct OverlapSums {
  double quartic = 0.0;
  double combined_sq = 0.0;
};

inline double iter_from_sums(Index n, const OverlapSums& s) {
  double v = 1.0 - s.quartic / (2.0 * static_cast<double>(n));
  return std::max(0.0, v);
}

// Row/column sums of A and B are all 1, which collapses the "Bob's index
// changed" probability to the same combined square.
inline double ic_from_sums(Index n, const OverlapSums& s) {
  double v = 1.0 - s.combined_sq / (4.0 * static_cast<double>(n));
  return std::max(0.0, v);
}

inline std::optional<double> qber_from_sums(Index n, const OverlapSums& s) {
  const double nn = static_cast<double>(n);
  const double num = 2.0 * nn - s.quartic;
  const double den = 4.0 * nn - s.combined_sq;
  if (den < kDegenerateTol) return std::nullopt;
  return std::max(0.0, num / den);
}

}  // namespace qkd::detail
