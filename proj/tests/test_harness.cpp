#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "convexlse/catalog.hpp"
#include "convexlse/csv.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/sampling.hpp"
#include "convexlse/serialize.hpp"

using namespace convexlse;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("convexlse_test_" + name);
}

}  // namespace

TEST_CASE("catalog pmfs") {
  CHECK(catalog("p0")(0) == doctest::Approx(11.0 / 66).epsilon(1e-14));
  CHECK(knots(catalog("p1")).interior == std::vector<int>{2, 5, 9});
  CHECK(knots(catalog("p2")).interior == std::vector<int>{4, 6, 8, 10});
  CHECK(knots(catalog("p3")).interior == std::vector<int>{3, 4, 5, 7, 9, 10});
  CHECK(knots(catalog("p4")).interior == std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(catalog("p5")(0) == doctest::Approx(0.5 / (1.0 - std::pow(2.0, -11))).epsilon(1e-14));
  for (const char* id : {"p0", "p1", "p2", "p3", "p4", "p5"}) {
    CHECK(catalog(id).support_end() == 10);
    CHECK(is_convex(catalog(id)));
  }
  CHECK_THROWS_AS(catalog("p6"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_weights("p0"), std::invalid_argument);
}

TEST_CASE("sampling by inversion") {
  const Pmf p0 = catalog("p0");
  Rng rng(51);
  const auto sample = draw_sample(p0, 10000, rng);
  for (int v : sample.values) {
    CHECK(v >= 0);
    CHECK(v <= p0.support_end());
  }
  const Pmf p_n = empirical_pmf(sample);
  double sup = 0.0;
  for (int k = 0; k <= p0.support_end(); ++k) sup = std::max(sup, std::abs(p_n(k) - p0(k)));
  CHECK(sup <= 0.02);

  Rng r1(52), r2(52);
  CHECK(draw_sample(p0, 100, r1).values == draw_sample(p0, 100, r2).values);
}

TEST_CASE("knot capture frequencies rise along the sample-size ladder") {
  ExperimentConfig cfg;
  cfg.pmfs = {"p1"};
  cfg.sample_sizes = {50, 200, 800, 3200};
  cfg.replications = 400;
  cfg.seed = 17;

  const auto report = knot_capture_experiment(cfg);
  REQUIRE(report.cells.size() == 4);
  for (std::size_t i = 1; i < report.cells.size(); ++i) {
    CHECK(report.cells[i].frequency_pct >= report.cells[i - 1].frequency_pct - 3.0);
  }
  // The ladder should sweep from near-miss to near-capture.
  CHECK(report.cells.front().frequency_pct < 25.0);
  CHECK(report.cells.back().frequency_pct > 60.0);
}

TEST_CASE("knot capture experiment (smoke scale)") {
  ExperimentConfig cfg;
  cfg.pmfs = {"p1"};
  cfg.sample_sizes = {50, 800};
  cfg.replications = 150;
  cfg.seed = 7;

  const auto report = knot_capture_experiment(cfg);
  REQUIRE(report.cells.size() == 2);
  for (const auto& cell : report.cells) {
    CHECK(cell.frequency_pct >= 0.0);
    CHECK(cell.frequency_pct <= 100.0);
    CHECK(cell.excluded == 0);
  }
  // Frequencies rise along the sample-size ladder (3pp slack).
  CHECK(report.cells[1].frequency_pct >= report.cells[0].frequency_pct - 3.0);

  ExperimentConfig serial = cfg;
  serial.mode = ExecMode::Serial;
  const auto reference = knot_capture_experiment(serial);
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    CHECK(report.cells[i].captured == reference.cells[i].captured);
    CHECK(report.cells[i].excluded == reference.cells[i].excluded);
    CHECK(report.cells[i].frequency_pct == reference.cells[i].frequency_pct);
  }
}

TEST_CASE("convergence experiment (smoke scale)") {
  ExperimentConfig cfg;
  cfg.pmfs = {"p0"};
  cfg.sample_sizes = {50};
  cfg.replications = 40;
  cfg.limit_draws = 60;
  cfg.repetitions = 3;
  cfg.seed = 8;

  const auto report = convergence_experiment(cfg);
  REQUIRE(report.cells.size() == 1);
  const auto& cell = report.cells[0];
  REQUIRE(cell.d_values.size() == 3);
  for (double d : cell.d_values) {
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
  }
  CHECK(cell.summary.min <= cell.summary.median);
  CHECK(cell.summary.median <= cell.summary.max);

  ExperimentConfig serial = cfg;
  serial.mode = ExecMode::Serial;
  const auto reference = convergence_experiment(serial);
  CHECK(reference.cells[0].d_values == cell.d_values);
}

TEST_CASE("sup cdf distance") {
  const std::vector<std::vector<double>> a{{-1.0, 0.0, 1.0}};
  CHECK(sup_cdf_distance(a, a, -3, 3, 0.01) == 0.0);

  const std::vector<std::vector<double>> b{{-1.0, 0.5, 1.0}};
  const double d = sup_cdf_distance(a, b, -3, 3, 0.01);
  CHECK(d == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const std::vector<std::vector<double>> far{{2.5, 2.6, 2.7}};
  CHECK(sup_cdf_distance(a, far, -3, 3, 0.01) == 1.0);
  CHECK_THROWS_AS(sup_cdf_distance(a, {{0.0}, {0.0}}, -3, 3, 0.01), std::invalid_argument);
}

TEST_CASE("five number summary") {
  const auto s = five_number_summary({5, 1, 3, 2, 4});
  CHECK(s.min == 1.0);
  CHECK(s.q1 == 2.0);
  CHECK(s.median == 3.0);
  CHECK(s.q3 == 4.0);
  CHECK(s.max == 5.0);
}

TEST_CASE("config json") {
  const auto path = temp_file("config.json");
  {
    std::ofstream out(path);
    out << R"({"pmfs": ["p1", "p4"], "sample_sizes": [50, 200], "replications": 12,
               "limit_draws": 34, "repetitions": 5, "seed": 99, "grid_step": 0.02,
               "mode": "serial"})";
  }
  const auto cfg = read_config_json(path);
  CHECK(cfg.pmfs == std::vector<std::string>{"p1", "p4"});
  CHECK(cfg.sample_sizes == std::vector<int>{50, 200});
  CHECK(cfg.replications == 12);
  CHECK(cfg.limit_draws == 34);
  CHECK(cfg.repetitions == 5);
  CHECK(cfg.seed == 99);
  CHECK(cfg.grid_step == 0.02);
  CHECK(cfg.mode == ExecMode::Serial);

  ExperimentConfig full = cfg;
  full.apply_full_scale();
  CHECK(full.replications == 1000);
  CHECK(full.limit_draws == 5000);
  CHECK(full.repetitions == 100);

  ExperimentConfig bad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST_CASE("pmf and weights json round-trips") {
  const Pmf p3 = catalog("p3");
  const Pmf back = pmf_from_json_string(pmf_to_json_string(p3));
  REQUIRE(back.support_end() == p3.support_end());
  for (int k = 0; k <= p3.support_end(); ++k) CHECK(std::abs(back(k) - p3(k)) <= 1e-12);

  const auto w = catalog_weights("p2");
  const auto wback = weights_from_json_string(weights_to_json_string(w));
  REQUIRE(wback.max_component() == w.max_component());
  for (int j = 1; j <= w.max_component(); ++j) CHECK(std::abs(wback(j) - w(j)) <= 1e-12);

  const auto path = temp_file("pmf.json");
  write_pmf_json(path, p3);
  const Pmf from_file = load_pmf(path.string());
  for (int k = 0; k <= p3.support_end(); ++k) CHECK(std::abs(from_file(k) - p3(k)) <= 1e-12);
  CHECK(load_pmf("p2")(0) == catalog("p2")(0));
  std::filesystem::remove(path);
}

TEST_CASE("sample files in both formats") {
  const auto text_path = temp_file("sample.txt");
  {
    std::ofstream out(text_path);
    out << "0\n2\n1\n1\n";
  }
  CHECK(read_sample_file(text_path).values == std::vector<int>{0, 2, 1, 1});

  const auto json_path = temp_file("sample.json");
  {
    std::ofstream out(json_path);
    out << R"({"counts": {"0": 2, "3": 1}})";
  }
  CHECK(read_sample_file(json_path).values == std::vector<int>{0, 0, 3});

  const Sample s({4, 0, 1});
  write_sample_file(text_path, s);
  CHECK(read_sample_file(text_path).values == s.values);

  CHECK_THROWS(read_sample_file(temp_file("missing.txt")));
  std::filesystem::remove(text_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("csv writer follows rfc 4180") {
  const auto path = temp_file("out.csv");
  {
    CsvWriter csv(path);
    csv.row({"k", "value", "note"});
    csv.row({"1", CsvWriter::number(0.1 + 0.2), "plain"});
    csv.row({"2", CsvWriter::number(1.0 / 3), "has,comma"});
    csv.row({"3", "0", "quote\"inside"});
  }
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\r\n") != std::string::npos);
  CHECK(text.find("\"has,comma\"") != std::string::npos);
  CHECK(text.find("\"quote\"\"inside\"") != std::string::npos);

  // number() round-trips the double exactly.
  CHECK(std::stod(CsvWriter::number(1.0 / 3)) == 1.0 / 3);
  CHECK(std::stod(CsvWriter::number(0.1 + 0.2)) == 0.1 + 0.2);
  std::filesystem::remove(path);
}

TEST_CASE("manifest") {
  const auto path = temp_file("manifest.json");
  RunManifest m;
  m.command = "catalog p0";
  m.seed = 77;
  m.mode = "openmp";
  m.threads = 4;
  m.elapsed_seconds = 0.25;
  m.version = "0.1.0";
  write_manifest(path, m);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"seed\": 77") != std::string::npos);
  CHECK(text.find("catalog p0") != std::string::npos);
  std::filesystem::remove(path);
}
