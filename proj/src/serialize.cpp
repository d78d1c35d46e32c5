#include "qkd/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qkd {

namespace {

using nlohmann::json;

json complex_entry(const Complex& z) { return json::array({z.real(), z.imag()}); }

std::string label_string(BasisLabel label) { return std::string(1, to_char(label)); }

const char* verdict_string(Verdict v) {
  return v == Verdict::KeyBit ? "KEY_BIT" : "DISCARDED";
}

const char* choice_string(BasisChoice c) { return c == BasisChoice::E ? "E" : "F"; }

}  // namespace

nlohmann::json basis_to_json(const Basis& basis) {
  json vectors = json::array();
  const Index n = basis.n();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      vectors.push_back(complex_entry(basis.vectors(j, i)));
    }
  }
  return json{{"n", n}, {"label", label_string(basis.label)}, {"vectors", vectors}};
}

Basis basis_from_json(const nlohmann::json& j, bool validate) {
  if (!j.is_object() || !j.contains("n") || !j.contains("vectors")) {
    throw std::invalid_argument("basis JSON must carry 'n' and 'vectors'");
  }
  if (!j["n"].is_number_integer()) {
    throw std::invalid_argument("basis JSON: 'n' must be an integer");
  }
  const auto n = j["n"].get<Index>();
  detail::require_dimension(n);

  Basis basis;
  basis.label = BasisLabel::G;
  if (j.contains("label")) {
    const auto label = j["label"].get<std::string>();
    if (label.size() != 1) {
      throw std::invalid_argument("basis JSON: label must be one of E, F, G");
    }
    basis.label = basis_label_from_char(label[0]);
  }

  const json& vectors = j["vectors"];
  if (!vectors.is_array() || vectors.size() != static_cast<std::size_t>(n * n)) {
    throw std::invalid_argument("basis JSON: 'vectors' must hold n*n [re, im] pairs");
  }
  basis.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j2 = 0; j2 < n; ++j2) {
      const json& entry = vectors[static_cast<std::size_t>(i * n + j2)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number()) {
        throw std::invalid_argument("basis JSON: entry is not a [re, im] pair");
      }
      const double re = entry[0].get<double>();
      const double im = entry[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw std::invalid_argument("basis JSON: entries must be finite");
      }
      basis.vectors(j2, i) = Complex(re, im);
    }
  }

  if (validate) {
    const BasisCheck check = validate_basis(basis);
    if (!check.ok) {
      throw std::invalid_argument(check.describe());
    }
  }
  return basis;
}

Basis load_basis_file(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open basis file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("basis file " + path + ": " + e.what());
  }
  try {
    return basis_from_json(j, validate);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("basis file " + path + ": " + e.what());
  }
}

void save_basis_file(const std::string& path, const Basis& basis) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write basis file: " + path);
  }
  out << basis_to_json(basis).dump(2) << '\n';
}

nlohmann::json rate_report_to_json(const ErrorRateReport& report) {
  json j{{"iter", report.iter}, {"ic", report.ic}, {"success", report.success}};
  if (report.qber) {
    j["qber"] = *report.qber;
  } else {
    j["qber"] = nullptr;
  }
  return j;
}

nlohmann::json summary_to_json(const SimulationSummary& summary,
                               const nlohmann::json& config_echo) {
  json j{{"schema", "qkd.summary.v1"},
         {"config", config_echo},
         {"rounds", summary.rounds},
         {"sifted", summary.sifted},
         {"index_comparisons", summary.index_comparisons},
         {"index_errors", summary.index_errors},
         {"bit_errors", summary.bit_errors},
         {"empirical_efficiency", summary.empirical_efficiency},
         {"seed", summary.seed}};
  j["empirical_iter"] =
      summary.empirical_iter ? json(*summary.empirical_iter) : json(nullptr);
  j["empirical_qber"] =
      summary.empirical_qber ? json(*summary.empirical_qber) : json(nullptr);
  return j;
}

nlohmann::json sift_record_to_json(const SiftRecord& record) {
  json j{{"alice_basis", choice_string(record.input.alice_basis)},
         {"alice_index", record.input.alice_index + 1},
         {"bob_basis", choice_string(record.input.bob_basis)},
         {"evan_present", record.input.evan_present},
         {"bob_index", record.bob_index + 1},
         {"verdict", verdict_string(record.verdict)},
         {"alice_bit", record.alice_bit}};
  j["evan_index"] = record.evan_index ? json(*record.evan_index + 1) : json(nullptr);
  j["decoded_bit"] = record.decoded_bit ? json(*record.decoded_bit) : json(nullptr);
  return j;
}

void write_records_ndjson(std::ostream& out, const nlohmann::json& config_echo,
                          std::span<const SiftRecord> records) {
  json header{{"schema", "qkd.sift-records.v1"}, {"config", config_echo}};
  out << header.dump() << '\n';
  for (const SiftRecord& record : records) {
    out << sift_record_to_json(record).dump() << '\n';
  }
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  // Trim to the shortest representation that round-trips.
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) return shorter;
  }
  return buf;
}

namespace {

void write_csv_preamble(std::ostream& out, const nlohmann::json& config_echo,
                        const char* header) {
  out << "# config: " << config_echo.dump() << '\n' << header << '\n';
}

}  // namespace

void write_table3_csv(std::ostream& out, const nlohmann::json& config_echo,
                      std::span<const TableThreeRow> rows) {
  write_csv_preamble(out, config_echo,
                     "n,iter_maxmin,qber_maxmin,f_samples,g_samples,seed");
  for (const TableThreeRow& row : rows) {
    out << row.n << ',' << format_double(row.iter_maxmin) << ','
        << format_double(row.qber_maxmin) << ',' << row.f_samples << ','
        << row.g_samples << ',' << row.seed << '\n';
  }
}

void write_table4_csv(std::ostream& out, const nlohmann::json& config_echo,
                      std::span<const MubScanResult> rows) {
  write_csv_preamble(out, config_echo, "n,iter_min_numeric,iter_analytic");
  for (const MubScanResult& row : rows) {
    out << row.n << ',' << format_double(row.iter_min_numeric) << ','
        << format_double(row.iter_analytic) << '\n';
  }
}

void write_fig1_csv(std::ostream& out, const nlohmann::json& config_echo, Index n,
                    std::span<const ScatterPoint> points) {
  write_csv_preamble(out, config_echo, "f_id,min_iter,iter_ceiling");
  const std::string ceiling = format_double(p_iter_mub(n));
  for (const ScatterPoint& p : points) {
    out << p.id << ',' << format_double(p.value) << ',' << ceiling << '\n';
  }
}

void write_fig3_csv(std::ostream& out, const nlohmann::json& config_echo,
                    std::span<const ScatterPoint> points) {
  write_csv_preamble(out, config_echo, "g_id,iter");
  for (const ScatterPoint& p : points) {
    out << p.id << ',' << format_double(p.value) << '\n';
  }
}

void write_alpha_overlay_csv(std::ostream& out, const nlohmann::json& config_echo,
                             std::span<const AlphaPoint> points) {
  write_csv_preamble(out, config_echo, "alpha,iter");
  for (const AlphaPoint& p : points) {
    out << format_double(p.alpha) << ',' << format_double(p.iter) << '\n';
  }
}

}  // namespace qkd
