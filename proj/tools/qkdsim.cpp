// qkdsim: deterministic command-line front end for the protocol simulator,
// the closed-form rate evaluators, and the random-search reproductions.
//
// Exit codes: 0 success, 2 usage or validation error, 3 eavesdropper
// detected (--threshold breached), 4 output I/O failure.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkd/bases.hpp"
#include "qkd/error_rates.hpp"
#include "qkd/protocol.hpp"
#include "qkd/search.hpp"
#include "qkd/serialize.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDetected = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes through a stringstream so a failed run never leaves a truncated
// file, and "-" targets stdout.
void write_output(const std::string& path, const std::string& payload) {
  if (path == "-") {
    std::cout << payload;
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << payload;
  out.flush();
  if (!out) throw IoError("cannot write output file: " + path);
}

json null_or(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json null_or_string(const std::string& v) { return v.empty() ? json(nullptr) : json(v); }

struct SimulateOpts {
  qkd::Index n = 2;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  bool mub = false;
  bool no_evan = false;
  bool no_validate = false;
  std::optional<double> phi1;
  std::optional<double> threshold;
  std::string e_file;
  std::string f_file;
  std::string evan = "none";
  std::string records_path;
  std::string out = "-";
  std::string format = "json";
  int workers = 0;
};

qkd::BasisPair resolve_pair(const SimulateOpts& o) {
  if (o.mub && o.phi1) {
    throw UsageError("--mub and --phi1 are mutually exclusive");
  }
  if ((o.e_file.empty()) != (o.f_file.empty())) {
    throw UsageError("--e-file and --f-file must be given together");
  }
  if (!o.e_file.empty()) {
    if (o.mub || o.phi1) {
      throw UsageError("basis files cannot be combined with --mub/--phi1");
    }
    qkd::Basis e = qkd::load_basis_file(o.e_file, !o.no_validate);
    qkd::Basis f = qkd::load_basis_file(o.f_file, !o.no_validate);
    if (e.n() != o.n || f.n() != o.n) {
      throw UsageError("basis files do not match --n");
    }
    e.label = qkd::BasisLabel::E;
    f.label = qkd::BasisLabel::F;
    return qkd::BasisPair(std::move(e), std::move(f));
  }
  if (o.phi1) {
    if (o.n != 2) throw UsageError("--phi1 requires --n 2");
    return qkd::BasisPair(qkd::computational_basis(2), qkd::rotation_basis_2d(*o.phi1));
  }
  // Default pair: mutually unbiased; the four-dimensional case uses the real
  // Hadamard-type construction so the alpha interceptor family applies.
  if (o.n == 4) return qkd::hadamard_mub_pair();
  return qkd::BasisPair(qkd::computational_basis(o.n), qkd::fourier_mub_basis(o.n));
}

std::optional<qkd::Basis> resolve_evan(const SimulateOpts& o, const qkd::BasisPair& pair) {
  std::string spec = o.evan;
  if (o.no_evan) {
    if (spec != "none") throw UsageError("--no-evan conflicts with --evan");
    return std::nullopt;
  }
  if (spec == "none") return std::nullopt;
  qkd::Basis g;
  if (spec == "e") {
    g = pair.e;
  } else if (spec == "f") {
    g = pair.f;
  } else if (spec.rfind("alpha:", 0) == 0) {
    double alpha = 0.0;
    const char* begin = spec.c_str() + 6;
    const char* end = spec.c_str() + spec.size();
    auto [p, ec] = std::from_chars(begin, end, alpha);
    if (ec != std::errc() || p != end) {
      throw UsageError("--evan alpha:<radians> needs a number, got '" + spec + "'");
    }
    g = qkd::interpolated_g_basis(pair, alpha);
  } else if (spec.rfind("file:", 0) == 0) {
    g = qkd::load_basis_file(spec.substr(5), !o.no_validate);
    if (g.n() != pair.n()) {
      throw UsageError("interceptor basis file does not match --n");
    }
  } else {
    throw UsageError("--evan must be one of e, f, alpha:<x>, file:<path>, none");
  }
  g.label = qkd::BasisLabel::G;
  return g;
}

json simulate_echo(const SimulateOpts& o) {
  // --workers is deliberately absent: results must not depend on it.
  return json{{"subcommand", "simulate"},
              {"n", o.n},
              {"rounds", o.rounds},
              {"seed", o.seed},
              {"mub", o.mub},
              {"phi1", null_or(o.phi1)},
              {"e_file", null_or_string(o.e_file)},
              {"f_file", null_or_string(o.f_file)},
              {"evan", o.no_evan ? "none" : o.evan},
              {"threshold", null_or(o.threshold)},
              {"records", null_or_string(o.records_path)},
              {"no_validate", o.no_validate},
              {"format", o.format},
              {"out", o.out}};
}

std::string summary_csv(const qkd::SimulationSummary& s, const json& echo) {
  std::ostringstream out;
  out << "# config: " << echo.dump() << '\n'
      << "rounds,sifted,index_comparisons,index_errors,bit_errors,"
         "empirical_iter,empirical_qber,empirical_efficiency,seed\n"
      << s.rounds << ',' << s.sifted << ',' << s.index_comparisons << ','
      << s.index_errors << ',' << s.bit_errors << ','
      << (s.empirical_iter ? qkd::format_double(*s.empirical_iter) : "") << ','
      << (s.empirical_qber ? qkd::format_double(*s.empirical_qber) : "") << ','
      << qkd::format_double(s.empirical_efficiency) << ',' << s.seed << '\n';
  return out.str();
}

int cmd_simulate(const SimulateOpts& o) {
  if (o.rounds == 0) throw UsageError("--rounds must be at least 1");
  const qkd::BasisPair pair = resolve_pair(o);
  const std::optional<qkd::Basis> evan = resolve_evan(o, pair);

  qkd::SimulationOptions sim_opts;
  sim_opts.seed = o.seed;
  sim_opts.workers = o.workers;
  sim_opts.keep_records = !o.records_path.empty();

  const qkd::SimulationResult result =
      qkd::simulate(pair, evan ? &*evan : nullptr, o.rounds, sim_opts);

  const json echo = simulate_echo(o);
  if (!o.records_path.empty()) {
    std::ostringstream records;
    qkd::write_records_ndjson(records, echo, result.records);
    write_output(o.records_path, records.str());
  }

  std::string payload;
  if (o.format == "csv") {
    payload = summary_csv(result.summary, echo);
  } else {
    payload = qkd::summary_to_json(result.summary, echo).dump(2) + "\n";
  }
  write_output(o.out, payload);

  if (o.threshold && result.summary.empirical_iter &&
      *result.summary.empirical_iter > *o.threshold) {
    std::cerr << "eavesdropper detected: empirical index error rate "
              << qkd::format_double(*result.summary.empirical_iter)
              << " exceeds threshold " << qkd::format_double(*o.threshold) << "\n";
    return kExitDetected;
  }
  return kExitOk;
}

struct RatesOpts {
  std::string e_file;
  std::string f_file;
  std::string g_file;
  std::string out = "-";
  std::string format = "json";
  bool no_validate = false;
  int workers = 0;  // accepted everywhere for uniformity; rates has no parallel work
};

int cmd_rates(const RatesOpts& o) {
  qkd::Basis e = qkd::load_basis_file(o.e_file, !o.no_validate);
  qkd::Basis f = qkd::load_basis_file(o.f_file, !o.no_validate);
  qkd::Basis g = qkd::load_basis_file(o.g_file, !o.no_validate);
  const qkd::ErrorRateReport report = qkd::evaluate_rates(e, f, g);

  const json echo = json{{"subcommand", "rates"},
                         {"e_file", o.e_file},
                         {"f_file", o.f_file},
                         {"g_file", o.g_file},
                         {"no_validate", o.no_validate},
                         {"format", o.format},
                         {"out", o.out}};
  std::string payload;
  if (o.format == "csv") {
    std::ostringstream outstr;
    outstr << "# config: " << echo.dump() << '\n'
           << "iter,qber,ic,success\n"
           << qkd::format_double(report.iter) << ','
           << (report.qber ? qkd::format_double(*report.qber) : "") << ','
           << qkd::format_double(report.ic) << ',' << qkd::format_double(report.success)
           << '\n';
    payload = outstr.str();
  } else {
    json j = qkd::rate_report_to_json(report);
    j["config"] = echo;
    payload = j.dump(2) + "\n";
  }
  write_output(o.out, payload);
  return kExitOk;
}

struct TableOpts {
  qkd::Index n_min = 2;
  qkd::Index n_max = 2;
  std::optional<qkd::Index> n;
  std::uint64_t f_samples = 10000;
  std::uint64_t g_samples = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

void resolve_range(TableOpts& o) {
  if (o.n) {
    o.n_min = *o.n;
    o.n_max = *o.n;
  }
  if (o.n_min < qkd::kMinDimension || o.n_max > qkd::kMaxDimension ||
      o.n_min > o.n_max) {
    throw UsageError("dimension range is invalid");
  }
}

int cmd_table3(TableOpts o) {
  resolve_range(o);
  const json echo = json{{"subcommand", "table3"},
                         {"n_min", o.n_min},
                         {"n_max", o.n_max},
                         {"f_samples", o.f_samples},
                         {"g_samples", o.g_samples},
                         {"seed", o.seed},
                         {"out", o.out}};
  std::vector<qkd::TableThreeRow> rows;
  for (qkd::Index n = o.n_min; n <= o.n_max; ++n) {
    qkd::SearchConfig config;
    config.n = n;
    config.f_samples = o.f_samples;
    config.g_samples = o.g_samples;
    config.seed = o.seed;
    config.workers = o.workers;
    config.objective = qkd::Objective::Iter;
    const qkd::SearchResult iter_result = qkd::double_optimize(config);
    config.objective = qkd::Objective::Qber;
    const qkd::SearchResult qber_result = qkd::double_optimize(config);
    rows.push_back({n, iter_result.max_min_value, qber_result.max_min_value,
                    o.f_samples, o.g_samples, o.seed});
  }
  std::ostringstream csv;
  qkd::write_table3_csv(csv, echo, rows);
  write_output(o.out, csv.str());
  return kExitOk;
}

int cmd_table4(TableOpts o) {
  resolve_range(o);
  const json echo = json{{"subcommand", "table4"},
                         {"n_min", o.n_min},
                         {"n_max", o.n_max},
                         {"g_samples", o.g_samples},
                         {"seed", o.seed},
                         {"out", o.out}};
  std::vector<qkd::MubScanResult> rows;
  for (qkd::Index n = o.n_min; n <= o.n_max; ++n) {
    rows.push_back(qkd::mub_scan(n, o.g_samples, o.seed, o.workers));
    if (rows.back().floor_violations > 0) {
      std::cerr << "note: n=" << n << ": " << rows.back().floor_violations
                << " candidates fell below the analytic floor\n";
    }
  }
  std::ostringstream csv;
  qkd::write_table4_csv(csv, echo, rows);
  write_output(o.out, csv.str());
  return kExitOk;
}

struct Fig1Opts {
  qkd::Index n = 4;
  std::uint64_t f_count = 2500;
  std::uint64_t g_samples = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

int cmd_fig1(const Fig1Opts& o) {
  const json echo = json{{"subcommand", "fig1"},
                         {"n", o.n},
                         {"f_count", o.f_count},
                         {"g_samples", o.g_samples},
                         {"seed", o.seed},
                         {"out", o.out}};
  const std::vector<qkd::ScatterPoint> points =
      qkd::minima_scatter(o.n, o.f_count, o.g_samples, o.seed, o.workers);
  std::ostringstream csv;
  qkd::write_fig1_csv(csv, echo, o.n, points);
  write_output(o.out, csv.str());
  return kExitOk;
}

struct Fig3Opts {
  std::uint64_t g_count = 100000;
  std::uint64_t seed = 1;
  std::size_t alpha_points = 100;
  int workers = 0;
  std::string out;
  std::string alpha_out;
};

int cmd_fig3(const Fig3Opts& o) {
  const json echo = json{{"subcommand", "fig3"},
                         {"g_count", o.g_count},
                         {"seed", o.seed},
                         {"alpha_points", o.alpha_points},
                         {"out", o.out},
                         {"alpha_out", null_or_string(o.alpha_out)}};
  const qkd::IterScatter scatter =
      qkd::iter_scatter(o.g_count, o.seed, o.alpha_points, o.workers);
  std::ostringstream csv;
  qkd::write_fig3_csv(csv, echo, scatter.points);
  write_output(o.out, csv.str());
  if (!o.alpha_out.empty()) {
    std::ostringstream overlay;
    qkd::write_alpha_overlay_csv(overlay, echo, scatter.alpha_overlay);
    write_output(o.alpha_out, overlay.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis tool for a two-basis high-error-rate "
               "key distribution protocol"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo protocol run with an optional interceptor");
  simulate->add_option("--n", sim.n, "State-space dimension")->required();
  simulate->add_option("--rounds", sim.rounds, "Number of rounds");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_flag("--mub", sim.mub,
                     "Use the standard mutually unbiased pair (default)");
  simulate->add_option("--phi1", sim.phi1,
                       "Two-dimensional pair: f basis rotated by phi1 radians");
  simulate->add_option("--e-file", sim.e_file, "Load the e basis from JSON");
  simulate->add_option("--f-file", sim.f_file, "Load the f basis from JSON");
  simulate->add_option("--evan", sim.evan,
                       "Interceptor basis: e, f, alpha:<x>, file:<path>, none");
  simulate->add_flag("--no-evan", sim.no_evan, "No interceptor (same as --evan none)");
  simulate->add_option("--threshold", sim.threshold,
                       "Exit 3 when the empirical index error rate exceeds this");
  simulate->add_option("--records", sim.records_path,
                       "Write per-round records as NDJSON to this path");
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = auto)");
  simulate->add_option("--out", sim.out, "Summary path or - for stdout");
  simulate->add_option("--format", sim.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate->add_flag("--no-validate", sim.no_validate,
                     "Skip orthonormality validation of loaded bases");

  RatesOpts rates;
  CLI::App* rates_cmd =
      app.add_subcommand("rates", "Closed-form rates for explicit (e, f, g) bases");
  rates_cmd->add_option("--e-file", rates.e_file, "e basis JSON")->required();
  rates_cmd->add_option("--f-file", rates.f_file, "f basis JSON")->required();
  rates_cmd->add_option("--g-file", rates.g_file, "g basis JSON")->required();
  rates_cmd->add_option("--out", rates.out, "Output path or - for stdout");
  rates_cmd->add_option("--format", rates.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rates_cmd->add_flag("--no-validate", rates.no_validate,
                      "Skip orthonormality validation of loaded bases");
  rates_cmd->add_option("--workers", rates.workers,
                        "Worker threads (ignored; rates is single evaluation)");

  TableOpts t3;
  t3.out = "table3.csv";
  CLI::App* table3 = app.add_subcommand(
      "table3", "Max-min random search over f against the best-sampled interceptor");
  table3->add_option("--n", t3.n, "Single dimension (overrides the range)");
  table3->add_option("--n-min", t3.n_min, "Smallest dimension");
  table3->add_option("--n-max", t3.n_max, "Largest dimension");
  table3->add_option("--f-samples", t3.f_samples, "Random f bases per dimension");
  table3->add_option("--g-samples", t3.g_samples, "Interceptor candidates per f");
  table3->add_option("--seed", t3.seed, "RNG seed");
  table3->add_option("--workers", t3.workers, "Worker threads (0 = auto)");
  table3->add_option("--out", t3.out, "CSV path or - for stdout");

  TableOpts t4;
  t4.n_min = 2;
  t4.n_max = 8;
  t4.g_samples = 1000000;
  t4.out = "table4.csv";
  CLI::App* table4 = app.add_subcommand(
      "table4", "Minimum index error rate against the MUB pair per dimension");
  table4->add_option("--n", t4.n, "Single dimension (overrides the range)");
  table4->add_option("--n-min", t4.n_min, "Smallest dimension");
  table4->add_option("--n-max", t4.n_max, "Largest dimension");
  table4->add_option("--g-samples", t4.g_samples, "Interceptor candidates");
  table4->add_option("--seed", t4.seed, "RNG seed");
  table4->add_option("--workers", t4.workers, "Worker threads (0 = auto)");
  table4->add_option("--out", t4.out, "CSV path or - for stdout");

  Fig1Opts f1;
  f1.out = "fig1.csv";
  CLI::App* fig1 = app.add_subcommand(
      "fig1", "Scatter of per-f interceptor minima against the MUB ceiling");
  fig1->add_option("--n", f1.n, "State-space dimension");
  fig1->add_option("--f-count", f1.f_count, "Random f bases");
  fig1->add_option("--g-samples", f1.g_samples, "Interceptor candidates per f");
  fig1->add_option("--seed", f1.seed, "RNG seed");
  fig1->add_option("--workers", f1.workers, "Worker threads (0 = auto)");
  fig1->add_option("--out", f1.out, "CSV path or - for stdout");

  Fig3Opts f3;
  f3.out = "fig3.csv";
  CLI::App* fig3 = app.add_subcommand(
      "fig3", "Index error rate of random interceptors against the 4-dim pair");
  fig3->add_option("--g-count", f3.g_count, "Random interceptor bases");
  fig3->add_option("--seed", f3.seed, "RNG seed");
  fig3->add_option("--alpha-points", f3.alpha_points, "Alpha grid size for overlay");
  fig3->add_option("--alpha-out", f3.alpha_out, "Write the alpha overlay CSV here");
  fig3->add_option("--workers", f3.workers, "Worker threads (0 = auto)");
  fig3->add_option("--out", f3.out, "CSV path or - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (rates_cmd->parsed()) return cmd_rates(rates);
    if (table3->parsed()) return cmd_table3(t3);
    if (table4->parsed()) return cmd_table4(t4);
    if (fig1->parsed()) return cmd_fig1(f1);
    if (fig3->parsed()) return cmd_fig3(f3);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
