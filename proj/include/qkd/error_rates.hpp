#pragma once

#include <optional>

#include "qkd/bases.hpp"
#include "qkd/types.hpp"

namespace qkd {

// Analytical rates for one interceptor basis g against an encoding pair.
// `qber` is absent when its denominator collapses (no sifted key survives,
// e.g. g equal to a shared e = f).
struct ErrorRateReport {
  double iter = 0.0;
  std::optional<double> qber;
  double ic = 0.0;
  double success = 0.0;
};

// Index transmission error rate, written as the expanded sum over basis
// triples; quadratic-cost reference form.
double p_iter_general(const Basis& e, const Basis& f, const Basis& g);

// Same quantity collapsed to quartic overlap sums; the form used in bulk
// scans.  Agrees with p_iter_general to 1e-12.
double p_iter_simplified(const Basis& e, const Basis& f, const Basis& g);

// Probability that interception changes Bob's index on a sifted round.
double p_index_change(const Basis& e, const Basis& f, const Basis& g);

// Quantum bit error rate of the sifted key; absent when degenerate.
std::optional<double> p_qber(const Basis& e, const Basis& f, const Basis& g);

// Closed form for the two-dimensional rotation family with interceptor
// angle phi2 against an f basis at phi1.
double p_iter_rotation_family(const AngleParams& params);

// Closed form along the interpolated interceptor family of the
// four-dimensional Hadamard pair.
double p_iter_interpolated_family(double alpha);

// Floor of the index error rate over all interceptor bases when e and f are
// mutually unbiased: (n - 1) / (2n).
double p_iter_mub(Index n);

// Fraction of undisturbed rounds that survive sifting, i.e. mean key bits
// per transmitted state: (n - 1) / (2n).
double p_success(Index n);

// All four rates in one pass over the overlap matrices.
ErrorRateReport evaluate_rates(const Basis& e, const Basis& f, const Basis& g);

}  // namespace qkd
