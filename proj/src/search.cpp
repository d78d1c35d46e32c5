#include "qkd/search.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "qkd/detail/rate_sums.hpp"
#include "qkd/error_rates.hpp"
#include "parallel.hpp"

namespace qkd {

namespace {

constexpr double kNoValue = std::numeric_limits<double>::infinity();

// Allocation-free objective evaluation against a fixed (e, f) pair; the
// plain accumulation order is fixed, so results are reproducible and agree
// with the compensated public evaluators to well under 1e-12 at n <= 8.
struct PairScanner {
  Index n = 0;
  bool e_identity = false;
  ComplexMatrix e_adj;
  ComplexMatrix f_adj;
  ComplexMatrix g;
  ComplexMatrix ae;
  ComplexMatrix bf;

  void bind(const Basis& e, const Basis& f) {
    n = e.n();
    e_identity = e.vectors.isIdentity(0.0);
    if (!e_identity) e_adj = e.vectors.adjoint();
    f_adj = f.vectors.adjoint();
    g.resize(n, n);
    ae.resize(n, n);
    bf.resize(n, n);
  }

  detail::OverlapSums eval(const ComplexMatrix& candidate) {
    const ComplexMatrix* ag = &candidate;
    if (!e_identity) {
      ae.noalias() = e_adj * candidate;
      ag = &ae;
    }
    bf.noalias() = f_adj * candidate;
    double quartic = 0.0;
    double combined = 0.0;
    for (Index k = 0; k < n; ++k) {
      for (Index i = 0; i < n; ++i) {
        const double a = std::norm((*ag)(i, k));
        const double b = std::norm(bf(i, k));
        quartic += a * a + b * b;
        const double c = a + b;
        combined += c * c;
      }
    }
    return {quartic, combined};
  }
};

double objective_from_sums(Objective objective, Index n, const detail::OverlapSums& s) {
  if (objective == Objective::Iter) return detail::iter_from_sums(n, s);
  std::optional<double> q = detail::qber_from_sums(n, s);
  return q ? *q : kNoValue;
}

struct ScanOutcome {
  double value = kNoValue;
  bool argmin_seeded = false;
  std::uint64_t argmin_id = 0;  // seeded slot or random candidate key
  std::uint64_t floor_violations = 0;
};

// Walks the candidate list in stream order; `floor` (when finite) counts
// candidates undercutting it beyond tolerance.
ScanOutcome scan_candidates(PairScanner& scanner, std::uint64_t g_samples,
                            Objective objective, const SplitRng& rng,
                            std::span<const Basis> seeded, double floor) {
  ScanOutcome out;
  std::uint64_t budget = g_samples;
  std::uint64_t slot = 0;
  for (const Basis& cand : seeded) {
    if (budget == 0) break;
    const double v = objective_from_sums(objective, scanner.n, scanner.eval(cand.vectors));
    if (v < floor - 1e-9) ++out.floor_violations;
    if (v < out.value) {
      out.value = v;
      out.argmin_seeded = true;
      out.argmin_id = slot;
    }
    ++slot;
    --budget;
  }
  for (std::uint64_t j = 0; budget > 0; ++j, --budget) {
    SplitRng leaf = rng.split(j);
    detail::haar_unitary_inplace(scanner.g, leaf);
    const double v = objective_from_sums(objective, scanner.n, scanner.eval(scanner.g));
    if (v < floor - 1e-9) ++out.floor_violations;
    if (v < out.value) {
      out.value = v;
      out.argmin_seeded = false;
      out.argmin_id = j;
    }
  }
  return out;
}

Basis rebuild_argmin(const ScanOutcome& out, const SplitRng& rng,
                     std::span<const Basis> seeded, Index n) {
  Basis g;
  g.label = BasisLabel::G;
  if (out.argmin_seeded) {
    g.vectors = seeded[out.argmin_id].vectors;
  } else {
    SplitRng leaf = rng.split(out.argmin_id);
    g.vectors.resize(n, n);
    detail::haar_unitary_inplace(g.vectors, leaf);
  }
  return g;
}

void require_scan_args(const Basis& e, const Basis& f, std::uint64_t g_samples,
                       std::span<const Basis> seeded) {
  detail::require_dimension(e.n());
  if (f.n() != e.n()) {
    throw std::invalid_argument("scan: basis dimensions differ");
  }
  for (const Basis& s : seeded) {
    if (s.n() != e.n()) {
      throw std::invalid_argument("scan: seeded candidate dimension differs");
    }
  }
  if (g_samples == 0) {
    throw std::invalid_argument("scan needs at least one candidate");
  }
}

// Shared f-loop behind double_optimize and minima_scatter: per-f minima of
// the objective, each f and its candidate stream derived from base.split(t).
std::vector<double> per_f_minima_scan(Index n, std::uint64_t f_samples,
                                      std::uint64_t g_samples, std::uint64_t seed,
                                      Objective objective, int workers) {
  detail::require_dimension(n);
  if (g_samples == 0) {
    throw std::invalid_argument("scan needs at least one candidate");
  }
  const Basis e = computational_basis(n);
  const SplitRng base(seed);
  std::vector<double> minima(f_samples, kNoValue);
  detail::run_sharded(
      f_samples, detail::effective_workers(f_samples, workers),
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        PairScanner scanner;
        Basis f;
        f.label = BasisLabel::F;
        f.vectors.resize(n, n);
        const std::span<const Basis> seeded(&e, 1);
        for (std::uint64_t t = begin; t < end; ++t) {
          const SplitRng f_stream = base.split(t);
          SplitRng f_leaf = f_stream.split(0);
          detail::haar_unitary_inplace(f.vectors, f_leaf);
          scanner.bind(e, f);
          const SplitRng g_stream = f_stream.split(1);
          minima[t] =
              scan_candidates(scanner, g_samples, objective, g_stream, seeded, -1.0)
                  .value;
        }
      });
  return minima;
}

}  // namespace

MinOverG min_over_g(const Basis& e, const Basis& f, std::uint64_t g_samples,
                    Objective objective, const SplitRng& rng,
                    std::span<const Basis> seeded) {
  require_scan_args(e, f, g_samples, seeded);
  PairScanner scanner;
  scanner.bind(e, f);
  const ScanOutcome out =
      scan_candidates(scanner, g_samples, objective, rng, seeded, -1.0);
  if (out.value == kNoValue) {
    throw std::invalid_argument("objective undefined for every candidate");
  }
  return {out.value, rebuild_argmin(out, rng, seeded, e.n())};
}

MinOverG min_over_g(const Basis& e, const Basis& f, std::uint64_t g_samples,
                    Objective objective, const SplitRng& rng) {
  return min_over_g(e, f, g_samples, objective, rng, std::span<const Basis>(&e, 1));
}

SearchResult double_optimize(const SearchConfig& config) {
  if (config.f_samples == 0) {
    throw std::invalid_argument("double_optimize needs at least one f sample");
  }
  std::vector<double> minima =
      per_f_minima_scan(config.n, config.f_samples, config.g_samples, config.seed,
                        config.objective, config.workers);

  std::uint64_t best_t = 0;
  double best = -kNoValue;
  for (std::uint64_t t = 0; t < minima.size(); ++t) {
    if (minima[t] != kNoValue && minima[t] > best) {
      best = minima[t];
      best_t = t;
    }
  }
  if (best == -kNoValue) {
    throw std::invalid_argument("objective undefined for every sampled f");
  }

  SearchResult result;
  result.max_min_value = best;
  result.best_f.label = BasisLabel::F;
  result.best_f.vectors.resize(config.n, config.n);
  SplitRng best_leaf = SplitRng(config.seed).split(best_t).split(0);
  detail::haar_unitary_inplace(result.best_f.vectors, best_leaf);
  if (config.record_minima) result.per_f_minima = std::move(minima);
  result.config = config;
  return result;
}

std::vector<ScatterPoint> minima_scatter(Index n, std::uint64_t f_count,
                                         std::uint64_t g_samples, std::uint64_t seed,
                                         int workers) {
  std::vector<ScatterPoint> points(f_count);
  if (f_count == 0) return points;
  const std::vector<double> minima =
      per_f_minima_scan(n, f_count, g_samples, seed, Objective::Iter, workers);
  for (std::uint64_t t = 0; t < f_count; ++t) {
    points[t] = {t, minima[t]};
  }
  return points;
}

MubScanResult mub_scan(Index n, std::uint64_t g_samples, std::uint64_t seed,
                       int workers) {
  const Basis e = computational_basis(n);
  const Basis f = fourier_mub_basis(n);
  const double floor = p_iter_mub(n);
  if (g_samples == 0) {
    throw std::invalid_argument("scan needs at least one candidate");
  }

  const SplitRng base(seed);
  const std::span<const Basis> seeded(&e, 1);
  const std::uint64_t workers_n = detail::effective_workers(g_samples, workers);
  std::vector<ScanOutcome> partial(workers_n);
  detail::run_sharded(
      g_samples, workers_n,
      [&](std::uint64_t w, std::uint64_t begin, std::uint64_t end) {
        PairScanner scanner;
        scanner.bind(e, f);
        ScanOutcome& out = partial[w];
        // Candidate 0 is the seeded g = e; random candidate j lives at
        // slot j + 1 and always draws from base.split(j), so shards see
        // exactly the slots [begin, end) of the global list.
        for (std::uint64_t slot = begin; slot < end; ++slot) {
          double v;
          bool is_seed = slot == 0;
          if (is_seed) {
            v = objective_from_sums(Objective::Iter, scanner.n, scanner.eval(e.vectors));
          } else {
            SplitRng leaf = base.split(slot - 1);
            detail::haar_unitary_inplace(scanner.g, leaf);
            v = objective_from_sums(Objective::Iter, scanner.n, scanner.eval(scanner.g));
          }
          if (v < floor - 1e-9) ++out.floor_violations;
          if (v < out.value) {
            out.value = v;
            out.argmin_seeded = is_seed;
            out.argmin_id = is_seed ? 0 : slot - 1;
          }
        }
      });

  MubScanResult result;
  result.n = n;
  result.iter_analytic = floor;
  ScanOutcome best;
  for (const ScanOutcome& out : partial) {
    result.floor_violations += out.floor_violations;
    // Shards cover disjoint slot ranges in increasing order, so strict <
    // keeps the earliest candidate on ties.
    if (out.value < best.value) {
      best.value = out.value;
      best.argmin_seeded = out.argmin_seeded;
      best.argmin_id = out.argmin_id;
    }
  }
  result.iter_min_numeric = best.value;
  return result;
}

IterScatter iter_scatter(std::uint64_t g_count, std::uint64_t seed,
                         std::size_t alpha_points, int workers) {
  const BasisPair pair = hadamard_mub_pair();
  IterScatter scatter;
  scatter.points.resize(g_count);

  const SplitRng base(seed);
  detail::run_sharded(
      g_count, detail::effective_workers(g_count, workers),
      [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        PairScanner scanner;
        scanner.bind(pair.e, pair.f);
        for (std::uint64_t j = begin; j < end; ++j) {
          SplitRng leaf = base.split(j);
          detail::haar_unitary_inplace(scanner.g, leaf);
          const double v =
              objective_from_sums(Objective::Iter, scanner.n, scanner.eval(scanner.g));
          scatter.points[j] = {j, v};
        }
      });

  scatter.alpha_overlay.reserve(alpha_points);
  for (std::size_t t = 0; t < alpha_points; ++t) {
    const double alpha = 2.0 * std::numbers::pi * static_cast<double>(t) /
                         static_cast<double>(alpha_points);
    const Basis g = interpolated_g_basis(pair, alpha);
    scatter.alpha_overlay.push_back({alpha, p_iter_simplified(pair.e, pair.f, g)});
  }
  return scatter;
}

}  // namespace qkd
