#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qkd/bases.hpp"
#include "qkd/serialize.hpp"
#include "support.hpp"

using namespace qkd;
using nlohmann::json;

TEST_CASE("basis JSON round trip preserves every entry and the label") {
  const BasisPair pair = hadamard_mub_pair();
  const json j = basis_to_json(pair.f);
  CHECK(j["n"] == 4);
  CHECK(j["label"] == "F");
  const Basis back = basis_from_json(j);
  CHECK(back.label == BasisLabel::F);
  CHECK((back.vectors == pair.f.vectors));

  // through the printed form as well
  const Basis reparsed = basis_from_json(json::parse(j.dump()));
  CHECK((reparsed.vectors == pair.f.vectors));

  const Basis g = testsupport::haar(3, 51, 0);
  const Basis g_back = basis_from_json(json::parse(basis_to_json(g).dump()));
  CHECK((g_back.vectors == g.vectors));
  CHECK(g_back.label == BasisLabel::G);
}

TEST_CASE("basis JSON entries are row-major over vector then component") {
  const Basis f = fourier_mub_basis(2);
  const json j = basis_to_json(f);
  const double r = 1.0 / std::sqrt(2.0);
  // entry i*n + j holds component j of vector i
  CHECK(j["vectors"][0][0].get<double>() == doctest::Approx(r).epsilon(1e-15));
  CHECK(j["vectors"][1][0].get<double>() == doctest::Approx(r).epsilon(1e-15));
  CHECK(j["vectors"][2][0].get<double>() == doctest::Approx(r).epsilon(1e-15));
  CHECK(j["vectors"][3][0].get<double>() == doctest::Approx(-r).epsilon(1e-15));
  CHECK(std::abs(j["vectors"][3][1].get<double>()) < 1e-15);
}

TEST_CASE("basis JSON rejects malformed input by name") {
  json missing_n{{"vectors", json::array()}};
  CHECK_THROWS_WITH_AS((void)basis_from_json(missing_n),
                       doctest::Contains("'n'"), std::invalid_argument);

  json bad_dim{{"n", 1}, {"vectors", json::array({json::array({1.0, 0.0})})}};
  CHECK_THROWS_AS((void)basis_from_json(bad_dim), std::invalid_argument);

  json wrong_count = basis_to_json(computational_basis(2));
  wrong_count["vectors"].erase(3);
  CHECK_THROWS_WITH_AS((void)basis_from_json(wrong_count),
                       doctest::Contains("n*n"), std::invalid_argument);

  json bad_entry = basis_to_json(computational_basis(2));
  bad_entry["vectors"][2] = json::array({1.0});
  CHECK_THROWS_WITH_AS((void)basis_from_json(bad_entry),
                       doctest::Contains("[re, im]"), std::invalid_argument);

  json non_finite = basis_to_json(computational_basis(2));
  non_finite["vectors"][0][0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_WITH_AS((void)basis_from_json(non_finite),
                       doctest::Contains("finite"), std::invalid_argument);

  json bad_label = basis_to_json(computational_basis(2));
  bad_label["label"] = "X";
  CHECK_THROWS_AS((void)basis_from_json(bad_label), std::invalid_argument);
}

TEST_CASE("orthonormality enforcement is optional on load") {
  Basis scaled;
  scaled.label = BasisLabel::G;
  scaled.vectors = ComplexMatrix::Identity(2, 2) * 0.5;
  const json j = basis_to_json(scaled);
  CHECK_THROWS_AS((void)basis_from_json(j), std::invalid_argument);
  const Basis loose = basis_from_json(j, false);
  CHECK(loose.vectors(0, 0).real() == 0.5);
}

TEST_CASE("label defaults to interceptor when absent") {
  json j = basis_to_json(computational_basis(2));
  j.erase("label");
  CHECK(basis_from_json(j).label == BasisLabel::G);
}

TEST_CASE("basis files round trip through disk") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "qkd_serialize_basis.json";
  const Basis g = testsupport::haar(4, 61, 0);
  save_basis_file(path.string(), g);
  const Basis back = load_basis_file(path.string());
  CHECK((back.vectors == g.vectors));
  fs::remove(path);

  CHECK_THROWS_AS((void)load_basis_file("/nonexistent/dir/basis.json"),
                  std::invalid_argument);
  CHECK_THROWS_AS(save_basis_file("/nonexistent/dir/basis.json", g),
                  std::runtime_error);

  // parse failures mention the path
  const fs::path garbled = fs::temp_directory_path() / "qkd_serialize_bad.json";
  {
    std::ofstream out(garbled);
    out << "{ not json";
  }
  CHECK_THROWS_WITH_AS((void)load_basis_file(garbled.string()),
                       doctest::Contains("qkd_serialize_bad.json"),
                       std::invalid_argument);
  fs::remove(garbled);
}

TEST_CASE("rate report JSON uses null for an undefined key rate") {
  ErrorRateReport report;
  report.iter = 0.375;
  report.ic = 0.5625;
  report.success = 0.375;
  report.qber = 1.0 / 3.0;
  json with = rate_report_to_json(report);
  CHECK(with["iter"] == 0.375);
  CHECK(with["ic"] == 0.5625);
  CHECK(with["success"] == 0.375);
  CHECK(with["qber"].get<double>() == doctest::Approx(1.0 / 3.0));

  report.qber.reset();
  json without = rate_report_to_json(report);
  CHECK(without["qber"].is_null());
}

TEST_CASE("summary JSON carries the counters and the config echo") {
  SimulationSummary s;
  s.rounds = 100;
  s.sifted = 30;
  s.index_comparisons = 50;
  s.index_errors = 10;
  s.bit_errors = 9;
  s.empirical_iter = 0.2;
  s.empirical_qber = 0.3;
  s.empirical_efficiency = 0.3;
  s.seed = 5;
  const json j = summary_to_json(s, json{{"n", 4}});
  CHECK(j["schema"] == "qkd.summary.v1");
  CHECK(j["config"]["n"] == 4);
  CHECK(j["rounds"] == 100);
  CHECK(j["sifted"] == 30);
  CHECK(j["index_comparisons"] == 50);
  CHECK(j["index_errors"] == 10);
  CHECK(j["bit_errors"] == 9);
  CHECK(j["empirical_iter"] == 0.2);
  CHECK(j["empirical_qber"] == 0.3);
  CHECK(j["empirical_efficiency"] == 0.3);
  CHECK(j["seed"] == 5);

  SimulationSummary empty;
  empty.rounds = 1;
  const json j2 = summary_to_json(empty, json::object());
  CHECK(j2["empirical_iter"].is_null());
  CHECK(j2["empirical_qber"].is_null());
}

TEST_CASE("sift records serialize with one-based indices") {
  SiftRecord rec;
  rec.input.alice_basis = BasisChoice::F;
  rec.input.alice_index = 2;
  rec.input.bob_basis = BasisChoice::E;
  rec.input.evan_present = true;
  rec.evan_index = 0;
  rec.bob_index = 3;
  rec.verdict = Verdict::KeyBit;
  rec.decoded_bit = 1;
  rec.alice_bit = 1;
  const json j = sift_record_to_json(rec);
  CHECK(j["alice_basis"] == "F");
  CHECK(j["alice_index"] == 3);
  CHECK(j["bob_basis"] == "E");
  CHECK(j["evan_present"] == true);
  CHECK(j["evan_index"] == 1);
  CHECK(j["bob_index"] == 4);
  CHECK(j["verdict"] == "KEY_BIT");
  CHECK(j["decoded_bit"] == 1);
  CHECK(j["alice_bit"] == 1);

  SiftRecord discarded;
  discarded.verdict = Verdict::Discarded;
  const json j2 = sift_record_to_json(discarded);
  CHECK(j2["verdict"] == "DISCARDED");
  CHECK(j2["evan_index"].is_null());
  CHECK(j2["decoded_bit"].is_null());
  CHECK(j2["alice_index"] == 1);
}

TEST_CASE("record streams start with a schema header line") {
  std::vector<SiftRecord> records(2);
  records[1].verdict = Verdict::KeyBit;
  records[1].decoded_bit = 0;
  std::ostringstream out;
  write_records_ndjson(out, json{{"seed", 3}}, records);

  std::istringstream lines(out.str());
  std::string line;
  REQUIRE(std::getline(lines, line));
  const json header = json::parse(line);
  CHECK(header["schema"] == "qkd.sift-records.v1");
  CHECK(header["config"]["seed"] == 3);
  int count = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    CHECK(rec.contains("verdict"));
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("doubles print as the shortest exact decimal") {
  CHECK(format_double(0.375) == "0.375");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-1.5) == "-1.5");
  for (double v : {1.0 / 3.0, 0.1, 5.0 / 12.0, 3.141592653589793, 1e-9,
                   0.3333333333333333, 123456.789}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("table output is stable byte for byte") {
  const json cfg{{"n", 2}};

  std::ostringstream t3;
  TableThreeRow row;
  row.n = 2;
  row.iter_maxmin = 0.25;
  row.qber_maxmin = 0.5;
  row.f_samples = 10;
  row.g_samples = 20;
  row.seed = 1;
  write_table3_csv(t3, cfg, std::span<const TableThreeRow>(&row, 1));
  CHECK(t3.str() ==
        "# config: {\"n\":2}\n"
        "n,iter_maxmin,qber_maxmin,f_samples,g_samples,seed\n"
        "2,0.25,0.5,10,20,1\n");

  std::ostringstream t4;
  MubScanResult scan;
  scan.n = 3;
  scan.iter_min_numeric = 1.0 / 3.0;
  scan.iter_analytic = 1.0 / 3.0;
  write_table4_csv(t4, cfg, std::span<const MubScanResult>(&scan, 1));
  const std::string third = format_double(1.0 / 3.0);
  CHECK(t4.str() == "# config: {\"n\":2}\nn,iter_min_numeric,iter_analytic\n3," +
                        third + "," + third + "\n");

  std::ostringstream f1;
  ScatterPoint p1{0, 0.4};
  write_fig1_csv(f1, cfg, 2, std::span<const ScatterPoint>(&p1, 1));
  CHECK(f1.str() == "# config: {\"n\":2}\nf_id,min_iter,iter_ceiling\n0,0.4,0.25\n");

  std::ostringstream f3;
  ScatterPoint p3{7, 0.5};
  write_fig3_csv(f3, cfg, std::span<const ScatterPoint>(&p3, 1));
  CHECK(f3.str() == "# config: {\"n\":2}\ng_id,iter\n7,0.5\n");

  std::ostringstream ov;
  AlphaPoint ap{0.0, 0.375};
  write_alpha_overlay_csv(ov, cfg, std::span<const AlphaPoint>(&ap, 1));
  CHECK(ov.str() == "# config: {\"n\":2}\nalpha,iter\n0,0.375\n");
}
