#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qkd {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Orthonormality slack accepted when validating a basis.
inline constexpr double kOrthoTol = 1e-9;

// Slack for values produced by closed-form constructions.
inline constexpr double kClosedFormTol = 1e-12;

// Denominators smaller than this are treated as degenerate.
inline constexpr double kDegenerateTol = 1e-12;

// Probability vectors fed to a measurement must sum to 1 within this.
inline constexpr double kProbSumTol = 1e-6;

inline constexpr Index kMinDimension = 2;
inline constexpr Index kMaxDimension = 64;

namespace detail {

// Compensated accumulator; keeps long reductions accurate enough for
// cross-checking two evaluation routes at 1e-12.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace detail

}  // namespace qkd
