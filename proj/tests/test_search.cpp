#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qkd/bases.hpp"
#include "qkd/error_rates.hpp"
#include "qkd/search.hpp"
#include "support.hpp"

using namespace qkd;

TEST_CASE("a budget of one evaluates only the seeded candidate") {
  const Basis e = computational_basis(2);
  const Basis f = fourier_mub_basis(2);
  const MinOverG result = min_over_g(e, f, 1, Objective::Iter, SplitRng(1));
  CHECK(std::abs(result.value - 0.25) < 1e-12);
  CHECK((result.argmin.vectors - e.vectors).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("minimum over candidates sits on the unbiased-pair floor") {
  const BasisPair pair = hadamard_mub_pair();
  const MinOverG result =
      min_over_g(pair.e, pair.f, 20000, Objective::Iter, SplitRng(3));
  CHECK(result.value >= 0.375 - 1e-9);
  CHECK(result.value <= 0.375 + 1e-12);
  CHECK(std::abs(p_iter_simplified(pair.e, pair.f, result.argmin) - result.value) <
        1e-12);
}

TEST_CASE("explicit candidate seeding") {
  const Basis e = computational_basis(3);
  const Basis f = testsupport::haar(3, 21, 0);

  SUBCASE("seeding with f caps the minimum at its rate") {
    const double f_rate = p_iter_simplified(e, f, f);
    const MinOverG result = min_over_g(e, f, 100, Objective::Iter, SplitRng(4),
                                       std::span<const Basis>(&f, 1));
    CHECK(result.value <= f_rate + 1e-12);
  }

  SUBCASE("empty seeding searches only random candidates") {
    const MinOverG result = min_over_g(e, f, 100, Objective::Iter, SplitRng(4),
                                       std::span<const Basis>());
    CHECK(result.value > 0.0);
    CHECK(std::abs(p_iter_simplified(e, f, result.argmin) - result.value) < 1e-12);
  }

  SUBCASE("seeded candidates must match the dimension") {
    const Basis wrong = computational_basis(2);
    CHECK_THROWS_AS((void)min_over_g(e, f, 10, Objective::Iter, SplitRng(4),
                                     std::span<const Basis>(&wrong, 1)),
                    std::invalid_argument);
  }

  SUBCASE("a zero budget is rejected") {
    CHECK_THROWS_AS((void)min_over_g(e, f, 0, Objective::Iter, SplitRng(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("growing the budget only lowers the minimum") {
  const Basis e = computational_basis(3);
  const Basis f = testsupport::haar(3, 33, 0);
  const SplitRng rng(9);
  const double at_100 = min_over_g(e, f, 100, Objective::Iter, rng).value;
  const double at_200 = min_over_g(e, f, 200, Objective::Iter, rng).value;
  const double at_400 = min_over_g(e, f, 400, Objective::Iter, rng).value;
  CHECK(at_100 >= at_200);
  CHECK(at_200 >= at_400);
}

TEST_CASE("candidates with a degenerate key-rate objective are skipped") {
  const Basis e = computational_basis(2);
  // identical encoding bases: the aligned candidate never produces a key
  const MinOverG result = min_over_g(e, e, 50, Objective::Qber, SplitRng(6));
  CHECK(std::isfinite(result.value));
  const auto qber = p_qber(e, e, result.argmin);
  REQUIRE(qber.has_value());
  CHECK(std::abs(*qber - result.value) < 1e-12);

  // a budget of one leaves only the degenerate seeded candidate
  CHECK_THROWS_AS((void)min_over_g(e, e, 1, Objective::Qber, SplitRng(6)),
                  std::invalid_argument);
}

TEST_CASE("max-min search is reproducible and self-consistent") {
  SearchConfig config;
  config.n = 2;
  config.f_samples = 30;
  config.g_samples = 50;
  config.seed = 7;
  config.record_minima = true;

  const SearchResult first = double_optimize(config);
  const SearchResult second = double_optimize(config);
  CHECK(first.max_min_value == second.max_min_value);
  CHECK((first.best_f.vectors == second.best_f.vectors));
  CHECK(first.per_f_minima == second.per_f_minima);

  REQUIRE(first.per_f_minima.size() == 30);
  const auto max_it =
      std::max_element(first.per_f_minima.begin(), first.per_f_minima.end());
  CHECK(*max_it == first.max_min_value);

  // winning f is rebuilt from its documented substream
  const auto best_t =
      static_cast<std::uint64_t>(max_it - first.per_f_minima.begin());
  SplitRng leaf = SplitRng(config.seed).split(best_t).split(0);
  const Basis rebuilt = random_haar_basis(2, leaf);
  CHECK((rebuilt.vectors == first.best_f.vectors));

  // and its minimum is reproduced by the standalone scan on the same stream
  const Basis e = computational_basis(2);
  const MinOverG direct =
      min_over_g(e, first.best_f, config.g_samples, Objective::Iter,
                 SplitRng(config.seed).split(best_t).split(1));
  CHECK(direct.value == first.max_min_value);

  CHECK(validate_basis(first.best_f).ok);
  // the aligned seeded candidate caps every minimum at the qubit floor
  for (double v : first.per_f_minima) {
    CHECK(v <= 0.25 + 1e-12);
    CHECK(v >= 0.0);
  }
  CHECK(first.config.seed == 7);
  CHECK(first.config.n == 2);
}

TEST_CASE("worker count never changes the search outcome") {
  SearchConfig config;
  config.n = 3;
  config.f_samples = 12;
  config.g_samples = 40;
  config.seed = 15;
  config.record_minima = true;

  config.workers = 1;
  const SearchResult serial = double_optimize(config);
  config.workers = 3;
  const SearchResult sharded = double_optimize(config);
  CHECK(serial.max_min_value == sharded.max_min_value);
  CHECK((serial.best_f.vectors == sharded.best_f.vectors));
  CHECK(serial.per_f_minima == sharded.per_f_minima);
}

TEST_CASE("max-min search under the key-rate objective") {
  SearchConfig config;
  config.n = 2;
  config.f_samples = 10;
  config.g_samples = 30;
  config.seed = 21;
  config.objective = Objective::Qber;

  const SearchResult result = double_optimize(config);
  CHECK(result.max_min_value > 0.0);
  CHECK(result.max_min_value <= 1.0);
  CHECK(validate_basis(result.best_f).ok);

  config.f_samples = 0;
  CHECK_THROWS_AS((void)double_optimize(config), std::invalid_argument);
}

TEST_CASE("unbiased-pair scan lands exactly on the analytic floor") {
  const MubScanResult three = mub_scan(3, 10000, 5);
  CHECK(three.n == 3);
  CHECK(three.iter_analytic == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(three.iter_min_numeric >= three.iter_analytic - 1e-9);
  CHECK(three.iter_min_numeric <= three.iter_analytic + 1e-12);
  CHECK(three.floor_violations == 0);

  const MubScanResult seven = mub_scan(7, 2000, 5);
  CHECK(seven.iter_analytic == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  CHECK(seven.iter_min_numeric >= 3.0 / 7.0 - 1e-9);
}

TEST_CASE("no sampled candidate undercuts the floor in any dimension") {
  for (Index n = 2; n <= 8; ++n) {
    const MubScanResult row = mub_scan(n, 2000, 77);
    CHECK(row.floor_violations == 0);
    CHECK(row.iter_min_numeric >= row.iter_analytic - 1e-9);
  }
}

TEST_CASE("unbiased-pair scan is worker-invariant") {
  const MubScanResult serial = mub_scan(4, 3000, 9, 1);
  const MubScanResult sharded = mub_scan(4, 3000, 9, 3);
  CHECK(serial.iter_min_numeric == sharded.iter_min_numeric);
  CHECK(serial.floor_violations == sharded.floor_violations);
}

TEST_CASE("per-f minima scatter") {
  CHECK(minima_scatter(4, 0, 10, 1).empty());

  const std::vector<ScatterPoint> points = minima_scatter(4, 40, 200, 13);
  REQUIRE(points.size() == 40);
  for (std::uint64_t t = 0; t < points.size(); ++t) {
    CHECK(points[t].id == t);
    CHECK(points[t].value >= 0.0);
    // the seeded aligned candidate caps each minimum at the unbiased floor
    CHECK(points[t].value <= 0.375 + 1e-9);
  }

  const std::vector<ScatterPoint> again = minima_scatter(4, 40, 200, 13);
  for (std::uint64_t t = 0; t < points.size(); ++t) {
    CHECK(points[t].value == again[t].value);
  }

  const std::vector<ScatterPoint> sharded = minima_scatter(4, 40, 200, 13, 3);
  for (std::uint64_t t = 0; t < points.size(); ++t) {
    CHECK(points[t].value == sharded[t].value);
  }
}

TEST_CASE("interceptor scatter against the four-dimensional pair") {
  const IterScatter empty = iter_scatter(0, 1);
  CHECK(empty.points.empty());
  CHECK(empty.alpha_overlay.size() == 100);

  const IterScatter scatter = iter_scatter(5000, 19);
  REQUIRE(scatter.points.size() == 5000);
  double lowest = 1.0;
  for (const ScatterPoint& p : scatter.points) {
    CHECK(p.value >= 0.375 - 1e-9);
    CHECK(p.value <= 1.0 + 1e-12);
    lowest = std::min(lowest, p.value);
  }
  CHECK(lowest < 0.50);  // the sampler does explore near the floor

  REQUIRE(scatter.alpha_overlay.size() == 100);
  for (const AlphaPoint& p : scatter.alpha_overlay) {
    CHECK(std::abs(p.iter - p_iter_interpolated_family(p.alpha)) < 1e-9);
  }
  CHECK(scatter.alpha_overlay.front().alpha == 0.0);

  const IterScatter sharded = iter_scatter(5000, 19, 100, 3);
  for (std::size_t j = 0; j < scatter.points.size(); ++j) {
    CHECK(scatter.points[j].value == sharded.points[j].value);
  }
}
