#include "qkd/error_rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkd/detail/rate_sums.hpp"

namespace qkd {

namespace {

void require_same_dimension(const Basis& e, const Basis& f, const Basis& g) {
  detail::require_dimension(e.n());
  if (f.n() != e.n() || g.n() != e.n()) {
    throw std::invalid_argument("rate evaluation: bases of different dimension");
  }
}

// A(i, k) = |<e_i|g_k>|^2 and B(i, k) = |<f_i|g_k>|^2.
struct OverlapTables {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

OverlapTables overlap_tables(const Basis& e, const Basis& f, const Basis& g) {
  OverlapTables t;
  t.a = (e.vectors.adjoint() * g.vectors).cwiseAbs2();
  t.b = (f.vectors.adjoint() * g.vectors).cwiseAbs2();
  return t;
}

detail::OverlapSums accumulate(const OverlapTables& t) {
  const Index n = t.a.rows();
  detail::KahanSum quartic;
  detail::KahanSum combined;
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) {
      const double a = t.a(i, k);
      const double b = t.b(i, k);
      quartic.add(a * a + b * b);
      const double c = a + b;
      combined.add(c * c);
    }
  }
  return {quartic.value(), combined.value()};
}

}  // namespace

double p_iter_general(const Basis& e, const Basis& f, const Basis& g) {
  require_same_dimension(e, f, g);
  const OverlapTables t = overlap_tables(e, f, g);
  const Index n = e.n();
  detail::KahanSum sum;
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        sum.add(t.a(i, k) * t.a(j, k));
        sum.add(t.b(i, k) * t.b(j, k));
      }
    }
  }
  return std::max(0.0, sum.value() / (2.0 * static_cast<double>(n)));
}

double p_iter_simplified(const Basis& e, const Basis& f, const Basis& g) {
  require_same_dimension(e, f, g);
  return detail::iter_from_sums(e.n(), accumulate(overlap_tables(e, f, g)));
}

double p_index_change(const Basis& e, const Basis& f, const Basis& g) {
  require_same_dimension(e, f, g);
  return detail::ic_from_sums(e.n(), accumulate(overlap_tables(e, f, g)));
}

std::optional<double> p_qber(const Basis& e, const Basis& f, const Basis& g) {
  require_same_dimension(e, f, g);
  return detail::qber_from_sums(e.n(), accumulate(overlap_tables(e, f, g)));
}

ErrorRateReport evaluate_rates(const Basis& e, const Basis& f, const Basis& g) {
  require_same_dimension(e, f, g);
  const detail::OverlapSums s = accumulate(overlap_tables(e, f, g));
  const Index n = e.n();
  ErrorRateReport report;
  report.iter = detail::iter_from_sums(n, s);
  report.ic = detail::ic_from_sums(n, s);
  report.qber = detail::qber_from_sums(n, s);
  report.success = p_success(n);
  return report;
}

double p_iter_rotation_family(const AngleParams& params) {
  const double d = std::sin(2.0 * (params.phi1 - params.phi2));
  const double s = std::sin(2.0 * params.phi2);
  return 0.25 * (d * d + s * s);
}

double p_iter_interpolated_family(double alpha) {
  const double a = canonical_angle(alpha);
  const double s = std::sin(2.0 * a);
  const double u = 2.0 + s;
  return 0.375 * (1.0 + (s * s) / (u * u));
}

double p_iter_mub(Index n) {
  detail::require_dimension(n);
  return static_cast<double>(n - 1) / (2.0 * static_cast<double>(n));
}

double p_success(Index n) {
  detail::require_dimension(n);
  return static_cast<double>(n - 1) / (2.0 * static_cast<double>(n));
}

}  // namespace qkd
