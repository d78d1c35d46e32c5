#pragma once

// Shared glue for the test binaries.

#include <cstddef>

#include "oracles.hpp"
#include "qkd/bases.hpp"
#include "qkd/rng.hpp"

namespace testsupport {

inline oracle::cbasis to_oracle(const qkd::Basis& b) {
  const auto n = static_cast<std::size_t>(b.n());
  oracle::cbasis out(n, oracle::cvec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = b.vectors(static_cast<qkd::Index>(j), static_cast<qkd::Index>(i));
    }
  }
  return out;
}

// Distinct substream per call site via caller-chosen keys.
inline qkd::Basis haar(qkd::Index n, std::uint64_t seed, std::uint64_t key) {
  qkd::SplitRng rng = qkd::SplitRng(seed).split(key);
  return qkd::random_haar_basis(n, rng);
}

}  // namespace testsupport
