#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkd/bases.hpp"
#include "qkd/error_rates.hpp"
#include "qkd/protocol.hpp"
#include "qkd/search.hpp"

namespace qkd {

// Basis wire format: {"n": N, "label": "E"|"F"|"G",
// "vectors": [[re, im], ...]} with the N*N entries row-major over
// (vector index, component).
nlohmann::json basis_to_json(const Basis& basis);

// Throws std::invalid_argument naming the violated invariant; `validate`
// additionally enforces orthonormality at the standard tolerance.
Basis basis_from_json(const nlohmann::json& j, bool validate = true);

Basis load_basis_file(const std::string& path, bool validate = true);
void save_basis_file(const std::string& path, const Basis& basis);

// {"iter": x, "qber": y or null, "ic": z, "success": w}
nlohmann::json rate_report_to_json(const ErrorRateReport& report);

nlohmann::json summary_to_json(const SimulationSummary& summary,
                               const nlohmann::json& config_echo);

// One line per record, 1-based indices, absent fields as null.
nlohmann::json sift_record_to_json(const SiftRecord& record);

// Header line {"schema": "qkd.sift-records.v1", "config": ...} followed by
// one record per line.
void write_records_ndjson(std::ostream& out, const nlohmann::json& config_echo,
                          std::span<const SiftRecord> records);

// Shortest exact decimal round-trip, same formatting in every CSV cell.
std::string format_double(double value);

struct TableThreeRow {
  Index n = 2;
  double iter_maxmin = 0.0;
  double qber_maxmin = 0.0;
  std::uint64_t f_samples = 0;
  std::uint64_t g_samples = 0;
  std::uint64_t seed = 0;
};

// Every CSV starts with "# config: <json>" then the fixed header row.
void write_table3_csv(std::ostream& out, const nlohmann::json& config_echo,
                      std::span<const TableThreeRow> rows);
void write_table4_csv(std::ostream& out, const nlohmann::json& config_echo,
                      std::span<const MubScanResult> rows);
void write_fig1_csv(std::ostream& out, const nlohmann::json& config_echo, Index n,
                    std::span<const ScatterPoint> points);
void write_fig3_csv(std::ostream& out, const nlohmann::json& config_echo,
                    std::span<const ScatterPoint> points);
void write_alpha_overlay_csv(std::ostream& out, const nlohmann::json& config_echo,
                             std::span<const AlphaPoint> points);

}  // namespace qkd
