#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qkd/bases.hpp"
#include "qkd/rng.hpp"
#include "qkd/types.hpp"

namespace qkd {

// Which of the two encoding bases a party picked for a round.
enum class BasisChoice : char { E = 'E', F = 'F' };

enum class Verdict : char { KeyBit = 'K', Discarded = 'D' };

// The random choices a round starts from.  Indices are 0-based internally;
// serialized forms are 1-based.
struct RoundInput {
  BasisChoice alice_basis = BasisChoice::E;
  Index alice_index = 0;
  BasisChoice bob_basis = BasisChoice::E;
  bool evan_present = false;
};

// Everything observable about one completed round after sifting.
struct SiftRecord {
  RoundInput input;
  std::optional<Index> evan_index;
  Index bob_index = 0;
  Verdict verdict = Verdict::Discarded;
  std::optional<int> decoded_bit;
  int alice_bit = 0;
};

struct SimulationSummary {
  std::uint64_t rounds = 0;
  std::uint64_t sifted = 0;
  std::uint64_t index_comparisons = 0;  // rounds where both used the same basis
  std::uint64_t index_errors = 0;
  std::uint64_t bit_errors = 0;
  std::optional<double> empirical_iter;
  std::optional<double> empirical_qber;
  double empirical_efficiency = 0.0;
  std::uint64_t seed = 0;
};

struct SimulationOptions {
  std::uint64_t seed = 1;
  int workers = 0;            // 0 = pick from hardware
  bool keep_records = false;  // retain per-round records (round order)
};

struct SimulationResult {
  SimulationSummary summary;
  std::vector<SiftRecord> records;  // empty unless keep_records
};

// Projective measurement: returns k with probability |<basis_k|state>|^2.
// Throws if the probabilities do not sum to 1 within kProbSumTol.
Index born_measure(const ComplexVector& state, const Basis& basis, SplitRng& rng);

// Plays one round from fixed choices: Alice prepares, the optional
// interceptor measures in g and forwards its outcome state, Bob measures,
// and the record is sifted.  `g` must be non-null iff input.evan_present.
SiftRecord run_round(const BasisPair& pair, const Basis* g, const RoundInput& input,
                     SplitRng& rng);

// Full Monte Carlo run: uniform random basis and index choices per round.
// Every round draws from its own derived substream, so the outcome is
// byte-identical no matter how rounds are sharded across workers.
SimulationResult simulate(const BasisPair& pair, const Basis* g, std::uint64_t rounds,
                          const SimulationOptions& options);

struct KeyBits {
  std::vector<std::uint8_t> alice;
  std::vector<std::uint8_t> bob;
};

// Key bits in round order from the records that survived sifting.
KeyBits extract_key(std::span<const SiftRecord> records);

}  // namespace qkd
