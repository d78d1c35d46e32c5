#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qkd/bases.hpp"
#include "qkd/rng.hpp"
#include "qkd/types.hpp"

namespace qkd {

enum class Objective : char { Iter = 'I', Qber = 'Q' };

struct SearchConfig {
  Index n = 2;
  std::uint64_t f_samples = 1;
  std::uint64_t g_samples = 1;
  std::uint64_t seed = 1;
  Objective objective = Objective::Iter;
  int workers = 0;             // 0 = pick from hardware; never affects values
  bool record_minima = false;  // keep the per-f minima in the result
};

struct SearchResult {
  Basis best_f;
  double max_min_value = 0.0;
  std::vector<double> per_f_minima;  // empty unless record_minima
  SearchConfig config;
};

struct MinOverG {
  double value = 0.0;
  Basis argmin;
};

// Minimum of the objective over g_samples candidate interceptor bases.
// The candidate list starts with the entries of `seeded` (they count toward
// g_samples); the rest are Haar-random, with candidate j drawn from
// rng.split(j) so a grown budget extends the list instead of reshuffling it.
// Ties keep the earliest candidate.  Candidates with an undefined objective
// (degenerate QBER) are skipped.
MinOverG min_over_g(const Basis& e, const Basis& f, std::uint64_t g_samples,
                    Objective objective, const SplitRng& rng,
                    std::span<const Basis> seeded);

// Default candidate seeding: the interceptor's analytically strongest simple
// guess, g = e, goes first.  Measuring in Alice's "0" basis attains the
// (n-1)/2n floor against any MUB partner, so including it tightens the
// minimum estimate at negligible cost.
MinOverG min_over_g(const Basis& e, const Basis& f, std::uint64_t g_samples,
                    Objective objective, const SplitRng& rng);

// Max-min random search: e is the computational basis, f ranges over
// f_samples Haar-random bases, and for each f the objective is minimized
// over the seeded-plus-random candidate list described above.  Returns the
// f whose minimum is largest.
SearchResult double_optimize(const SearchConfig& config);

struct ScatterPoint {
  std::uint64_t id = 0;
  double value = 0.0;
};

// Per-f minima against the computational e, one point per random f;
// the plotting reference line for these minima is p_iter_mub(n).
std::vector<ScatterPoint> minima_scatter(Index n, std::uint64_t f_count,
                                         std::uint64_t g_samples, std::uint64_t seed,
                                         int workers = 0);

// One row of the MUB-floor table: minimum index error rate over the candidate
// list for the computational/Fourier pair, next to the analytic floor.
// floor_violations counts sampled candidates that undercut the floor by more
// than 1e-9; the closed form says there are none, so a nonzero count is a
// finding worth reporting, not a crash.
struct MubScanResult {
  Index n = 2;
  double iter_min_numeric = 0.0;
  double iter_analytic = 0.0;
  std::uint64_t floor_violations = 0;
};

MubScanResult mub_scan(Index n, std::uint64_t g_samples, std::uint64_t seed,
                       int workers = 0);

struct AlphaPoint {
  double alpha = 0.0;
  double iter = 0.0;
};

// Index error rate of each of g_count Haar-random interceptor bases against
// the four-dimensional Hadamard pair, plus the interpolated-family overlay
// evaluated on a uniform alpha grid.
struct IterScatter {
  std::vector<ScatterPoint> points;
  std::vector<AlphaPoint> alpha_overlay;
};

IterScatter iter_scatter(std::uint64_t g_count, std::uint64_t seed,
                         std::size_t alpha_points = 100, int workers = 0);

}  // namespace qkd
