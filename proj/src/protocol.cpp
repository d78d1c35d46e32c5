#include "qkd/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace qkd {

namespace {

// Inverse-CDF sample over |<basis_k|state>|^2; the last bucket absorbs the
// rounding residue so a draw of u ~ 1 still lands on a valid outcome.
Index born_measure_impl(const ComplexVector& amplitudes_conj_state,
                        SplitRng& rng) {
  const Index n = amplitudes_conj_state.size();
  double total = 0.0;
  for (Index k = 0; k < n; ++k) {
    total += std::norm(amplitudes_conj_state(k));
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw std::invalid_argument("measurement probabilities do not sum to 1");
  }
  const double u = rng.next_double() * total;
  double cum = 0.0;
  for (Index k = 0; k + 1 < n; ++k) {
    cum += std::norm(amplitudes_conj_state(k));
    if (u < cum) return k;
  }
  return n - 1;
}

const Basis& chosen(const BasisPair& pair, BasisChoice c) {
  return c == BasisChoice::E ? pair.e : pair.f;
}

struct RoundWorkspace {
  ComplexVector amps;
};

// Core of a round once Alice's choices are fixed.  `draw_bob_basis` lets the
// caller either honor a preset choice or consume one from the stream, which
// keeps run_round and simulate on the same code path.
template <typename BobBasisFn>
SiftRecord play_round(const BasisPair& pair, const Basis* g, BasisChoice alice_basis,
                      Index alice_index, bool evan_present, BobBasisFn draw_bob_basis,
                      SplitRng& rng, RoundWorkspace& ws) {
  SiftRecord rec;
  rec.input.alice_basis = alice_basis;
  rec.input.alice_index = alice_index;
  rec.input.evan_present = evan_present;
  rec.alice_bit = (alice_basis == BasisChoice::E) ? 0 : 1;

  const Basis& prep = chosen(pair, alice_basis);
  // state = prepared column, possibly replaced by the interceptor's outcome
  const ComplexMatrix* state_basis = &prep.vectors;
  Index state_col = alice_index;

  if (evan_present) {
    ws.amps.noalias() = g->vectors.adjoint() * state_basis->col(state_col);
    Index k = born_measure_impl(ws.amps, rng);
    rec.evan_index = k;
    state_basis = &g->vectors;
    state_col = k;
  }

  const BasisChoice bob_basis = draw_bob_basis(rng);
  rec.input.bob_basis = bob_basis;
  const Basis& meas = chosen(pair, bob_basis);
  ws.amps.noalias() = meas.vectors.adjoint() * state_basis->col(state_col);
  rec.bob_index = born_measure_impl(ws.amps, rng);

  if (rec.bob_index == alice_index) {
    rec.verdict = Verdict::Discarded;
  } else {
    rec.verdict = Verdict::KeyBit;
    rec.decoded_bit = (bob_basis == BasisChoice::E) ? 1 : 0;
  }
  return rec;
}

struct Tally {
  std::uint64_t sifted = 0;
  std::uint64_t index_comparisons = 0;
  std::uint64_t index_errors = 0;
  std::uint64_t bit_errors = 0;

  void add(const SiftRecord& rec) {
    if (rec.input.alice_basis == rec.input.bob_basis) {
      ++index_comparisons;
      if (rec.bob_index != rec.input.alice_index) ++index_errors;
    }
    if (rec.verdict == Verdict::KeyBit) {
      ++sifted;
      if (*rec.decoded_bit != rec.alice_bit) ++bit_errors;
    }
  }

  void merge(const Tally& other) {
    sifted += other.sifted;
    index_comparisons += other.index_comparisons;
    index_errors += other.index_errors;
    bit_errors += other.bit_errors;
  }
};

// One full round from the per-round substream; draw order is fixed:
// alice_basis, alice_index, evan, bob_basis, bob_measure.
SiftRecord simulated_round(const BasisPair& pair, const Basis* g, SplitRng round_rng,
                           RoundWorkspace& ws) {
  const Index n = pair.n();
  const auto alice_basis =
      round_rng.next_below(2) == 0 ? BasisChoice::E : BasisChoice::F;
  const auto alice_index = static_cast<Index>(round_rng.next_below(n));
  return play_round(
      pair, g, alice_basis, alice_index, g != nullptr,
      [](SplitRng& r) { return r.next_below(2) == 0 ? BasisChoice::E : BasisChoice::F; },
      round_rng, ws);
}

}  // namespace

Index born_measure(const ComplexVector& state, const Basis& basis, SplitRng& rng) {
  if (state.size() != basis.n()) {
    throw std::invalid_argument("measurement: state/basis dimension mismatch");
  }
  ComplexVector amps = basis.vectors.adjoint() * state;
  return born_measure_impl(amps, rng);
}

SiftRecord run_round(const BasisPair& pair, const Basis* g, const RoundInput& input,
                     SplitRng& rng) {
  if (input.evan_present && g == nullptr) {
    throw std::invalid_argument("round expects an interceptor basis");
  }
  if (g != nullptr && g->n() != pair.n()) {
    throw std::invalid_argument("interceptor basis dimension mismatch");
  }
  if (input.alice_index < 0 || input.alice_index >= pair.n()) {
    throw std::invalid_argument("alice_index outside dimension");
  }
  RoundWorkspace ws;
  return play_round(
      pair, input.evan_present ? g : nullptr, input.alice_basis, input.alice_index,
      input.evan_present, [&input](SplitRng&) { return input.bob_basis; }, rng, ws);
}

SimulationResult simulate(const BasisPair& pair, const Basis* g, std::uint64_t rounds,
                          const SimulationOptions& options) {
  if (rounds == 0) {
    throw std::invalid_argument("simulate requires at least one round");
  }
  if (g != nullptr && g->n() != pair.n()) {
    throw std::invalid_argument("interceptor basis dimension mismatch");
  }

  const SplitRng base(options.seed);
  unsigned hw = std::thread::hardware_concurrency();
  std::uint64_t workers = options.workers > 0
                              ? static_cast<std::uint64_t>(options.workers)
                              : std::uint64_t{hw == 0 ? 1 : hw};
  if (workers > rounds) workers = rounds;

  SimulationResult result;
  if (options.keep_records) result.records.resize(rounds);

  std::vector<Tally> tallies(workers);
  auto work = [&](std::uint64_t w) {
    // contiguous chunk per worker; substreams keyed by absolute round index
    const std::uint64_t begin = rounds * w / workers;
    const std::uint64_t end = rounds * (w + 1) / workers;
    RoundWorkspace ws;
    ws.amps.resize(pair.n());
    Tally& tally = tallies[w];
    for (std::uint64_t r = begin; r < end; ++r) {
      SiftRecord rec = simulated_round(pair, g, base.split(r), ws);
      tally.add(rec);
      if (options.keep_records) result.records[r] = std::move(rec);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  Tally total;
  for (const auto& t : tallies) total.merge(t);

  SimulationSummary& s = result.summary;
  s.rounds = rounds;
  s.sifted = total.sifted;
  s.index_comparisons = total.index_comparisons;
  s.index_errors = total.index_errors;
  s.bit_errors = total.bit_errors;
  if (total.index_comparisons > 0) {
    s.empirical_iter = static_cast<double>(total.index_errors) /
                       static_cast<double>(total.index_comparisons);
  }
  if (total.sifted > 0) {
    s.empirical_qber =
        static_cast<double>(total.bit_errors) / static_cast<double>(total.sifted);
  }
  s.empirical_efficiency =
      static_cast<double>(total.sifted) / static_cast<double>(rounds);
  s.seed = options.seed;
  return result;
}

KeyBits extract_key(std::span<const SiftRecord> records) {
  KeyBits key;
  for (const auto& rec : records) {
    if (rec.verdict != Verdict::KeyBit) continue;
    key.alice.push_back(static_cast<std::uint8_t>(rec.alice_bit));
    key.bob.push_back(static_cast<std::uint8_t>(*rec.decoded_bit));
  }
  return key;
}

}  // namespace qkd
