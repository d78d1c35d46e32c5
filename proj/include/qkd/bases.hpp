#pragma once

#include <string>
#include <vector>

#include "qkd/rng.hpp"
#include "qkd/types.hpp"

namespace qkd {

// Which role a basis plays in the protocol: Alice's "0" basis (E), her "1"
// basis (F), or an interceptor basis (G).
enum class BasisLabel : char { E = 'E', F = 'F', G = 'G' };

char to_char(BasisLabel label);
BasisLabel basis_label_from_char(char c);

// Orthonormal basis of an n-dimensional state space; column k of `vectors`
// is the k-th basis state.  The authoring functions below guarantee
// orthonormality; data loaded from elsewhere should go through
// validate_basis().
struct Basis {
  BasisLabel label = BasisLabel::G;
  ComplexMatrix vectors;

  Index n() const { return vectors.cols(); }
  ComplexVector vector(Index k) const { return vectors.col(k); }
};

// The two encoding bases used by the legitimate parties.
struct BasisPair {
  Basis e;
  Basis f;

  BasisPair(Basis e_basis, Basis f_basis);
  Index n() const { return e.n(); }
};

// Angles parameterizing the two-dimensional basis family; canonicalized to
// [0, 2*pi) on construction.
struct AngleParams {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double alpha = 0.0;

  AngleParams() = default;
  AngleParams(double phi1_in, double phi2_in, double alpha_in);
};

double canonical_angle(double radians);

// <a|b>: conjugate-linear in the first argument.
Complex inner_product(const ComplexVector& a, const ComplexVector& b);

// Standard basis of C^n, labelled E.
Basis computational_basis(Index n);

// Discrete-Fourier basis, labelled F; mutually unbiased with the
// computational basis in every dimension.
Basis fourier_mub_basis(Index n);

// Two-dimensional basis {(cos phi, sin phi), (-sin phi, cos phi)}, labelled F.
Basis rotation_basis_2d(double phi);

// The concrete four-dimensional pair: computational E and a real Hadamard-type
// F whose states all have overlap 1/4 with every E state.
BasisPair hadamard_mub_pair();

// Interceptor family g_i(alpha) ~ cos(alpha) e_i + sin(alpha) f_i, normalized;
// orthonormal for every alpha, but only for the hadamard_mub_pair() states,
// whose cross-overlap pattern makes the off-diagonal terms cancel.
Basis interpolated_g_basis(const BasisPair& pair, double alpha);

// Haar-distributed random basis, labelled G.
Basis random_haar_basis(Index n, SplitRng& rng);

// Orthonormality report: residual magnitudes above `tol`, by index pair.
struct BasisCheck {
  struct Violation {
    Index i;
    Index j;
    double residual;
  };

  bool ok = true;
  std::vector<Violation> violations;

  std::string describe() const;
};

BasisCheck validate_basis(const Basis& basis, double tol = kOrthoTol);

namespace detail {

// Overwrites `m` (square, preallocated) with a Haar-distributed unitary.
// Gaussian entries followed by column-wise Gram-Schmidt with a second
// orthogonalization pass; the positive column norms fix the phase gauge,
// which is exactly the convention that makes the result Haar.
void haar_unitary_inplace(ComplexMatrix& m, SplitRng& rng);

void require_dimension(Index n);

}  // namespace detail

}  // namespace qkd
