#include "qkd/bases.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qkd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

char to_char(BasisLabel label) { return static_cast<char>(label); }

BasisLabel basis_label_from_char(char c) {
  switch (c) {
    case 'E':
      return BasisLabel::E;
    case 'F':
      return BasisLabel::F;
    case 'G':
      return BasisLabel::G;
    default:
      throw std::invalid_argument(std::string("unknown basis label '") + c + "'");
  }
}

BasisPair::BasisPair(Basis e_basis, Basis f_basis)
    : e(std::move(e_basis)), f(std::move(f_basis)) {
  if (e.n() != f.n()) {
    throw std::invalid_argument("basis pair: dimensions differ");
  }
}

double canonical_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("angle must be finite");
  }
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

AngleParams::AngleParams(double phi1_in, double phi2_in, double alpha_in)
    : phi1(canonical_angle(phi1_in)),
      phi2(canonical_angle(phi2_in)),
      alpha(canonical_angle(alpha_in)) {}

Complex inner_product(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("inner product: dimension mismatch");
  }
  return a.dot(b);
}

namespace detail {

void require_dimension(Index n) {
  if (n < kMinDimension || n > kMaxDimension) {
    std::ostringstream msg;
    msg << "dimension " << n << " outside supported range [" << kMinDimension
        << ", " << kMaxDimension << "]";
    throw std::invalid_argument(msg.str());
  }
}

void haar_unitary_inplace(ComplexMatrix& m, SplitRng& rng) {
  const Index n = m.rows();
  for (Index k = 0; k < n; ++k) {
    for (Index r = 0; r < n; ++r) {
      m(r, k) = rng.next_cnormal();
    }
  }
  for (Index k = 0; k < n; ++k) {
    auto col = m.col(k);
    // Second pass removes the residue the first leaves at ~n*eps, keeping
    // columns orthogonal to machine precision even for unlucky draws.
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < k; ++j) {
        col -= m.col(j).dot(col) * m.col(j);
      }
    }
    double norm = col.norm();
    while (norm == 0.0) {  // vanishing draws have measure zero; stay safe
      for (Index r = 0; r < n; ++r) {
        col(r) = rng.next_cnormal();
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < k; ++j) {
          col -= m.col(j).dot(col) * m.col(j);
        }
      }
      norm = col.norm();
    }
    col /= norm;
  }
}

}  // namespace detail

Basis computational_basis(Index n) {
  detail::require_dimension(n);
  Basis b;
  b.label = BasisLabel::E;
  b.vectors = ComplexMatrix::Identity(n, n);
  return b;
}

Basis fourier_mub_basis(Index n) {
  detail::require_dimension(n);
  Basis b;
  b.label = BasisLabel::F;
  b.vectors.resize(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      // Reduce the exponent first so the phase stays in [0, 2*pi) and the
      // entries for small n come out bit-clean.
      Index k = (i * j) % n;
      double phase = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      b.vectors(j, i) = std::polar(scale, phase);
    }
  }
  return b;
}

Basis rotation_basis_2d(double phi) {
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("rotation angle must be finite");
  }
  Basis b;
  b.label = BasisLabel::F;
  b.vectors.resize(2, 2);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  b.vectors(0, 0) = c;
  b.vectors(1, 0) = s;
  b.vectors(0, 1) = -s;
  b.vectors(1, 1) = c;
  return b;
}

BasisPair hadamard_mub_pair() {
  Basis f;
  f.label = BasisLabel::F;
  f.vectors.resize(4, 4);
  const double h = 0.5;
  const double rows[4][4] = {
      {h, h, -h, -h},
      {-h, h, h, -h},
      {h, -h, h, -h},
      {h, h, h, h},
  };
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      f.vectors(j, i) = rows[i][j];
    }
  }
  return BasisPair(computational_basis(4), std::move(f));
}

Basis interpolated_g_basis(const BasisPair& pair, double alpha) {
  const BasisPair reference = hadamard_mub_pair();
  if (pair.n() != 4 ||
      !pair.e.vectors.isApprox(reference.e.vectors, kClosedFormTol) ||
      !pair.f.vectors.isApprox(reference.f.vectors, kClosedFormTol)) {
    throw std::invalid_argument(
        "interpolated basis is defined only for the four-dimensional "
        "Hadamard pair");
  }
  const double a = canonical_angle(alpha);
  const double c = std::cos(a);
  const double s = std::sin(a);
  const double denom = std::sqrt(1.0 + 0.5 * std::sin(2.0 * a));
  if (denom < kDegenerateTol) {
    throw std::invalid_argument("interpolated basis degenerate at this angle");
  }
  Basis g;
  g.label = BasisLabel::G;
  g.vectors = (c * pair.e.vectors + s * pair.f.vectors) / denom;
  return g;
}

Basis random_haar_basis(Index n, SplitRng& rng) {
  detail::require_dimension(n);
  Basis g;
  g.label = BasisLabel::G;
  g.vectors.resize(n, n);
  detail::haar_unitary_inplace(g.vectors, rng);
  return g;
}

BasisCheck validate_basis(const Basis& basis, double tol) {
  BasisCheck check;
  const Index n = basis.vectors.cols();
  if (basis.vectors.rows() != n || n < kMinDimension || n > kMaxDimension) {
    check.ok = false;
    check.violations.push_back({-1, -1, 0.0});
    return check;
  }
  if (!basis.vectors.allFinite()) {
    check.ok = false;
    check.violations.push_back({-1, -1, std::numeric_limits<double>::infinity()});
    return check;
  }
  ComplexMatrix gram = basis.vectors.adjoint() * basis.vectors;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      double target = (i == j) ? 1.0 : 0.0;
      double residual = std::abs(gram(i, j) - Complex(target, 0.0));
      if (residual > tol) {
        check.ok = false;
        check.violations.push_back({i, j, residual});
      }
    }
  }
  return check;
}

std::string BasisCheck::describe() const {
  if (ok) return "orthonormal";
  std::ostringstream out;
  out << "basis invalid:";
  for (const auto& v : violations) {
    if (v.i < 0) {
      out << " shape or entries unusable;";
      continue;
    }
    if (v.i == v.j) {
      out << " vector " << v.i << " norm off by " << v.residual << ";";
    } else {
      out << " vectors (" << v.i << ", " << v.j << ") overlap " << v.residual
          << ";";
    }
  }
  return out.str();
}

}  // namespace qkd
