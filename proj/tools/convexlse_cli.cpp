// Command-line front end: estimate a convex pmf from a sample, draw from
// the weak limit of the estimation error, and run the two Monte Carlo
// studies. All outputs are CSV plus a JSON run manifest.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "convexlse/catalog.hpp"
#include "convexlse/csv.hpp"
#include "convexlse/estimator.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/limit_law.hpp"
#include "convexlse/sampling.hpp"
#include "convexlse/serialize.hpp"

using namespace convexlse;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  double tol = 1e-8;
  bool full_scale = false;
  bool serial = false;

  ExecMode mode() const { return serial ? ExecMode::Serial : ExecMode::OpenMP; }
};

fs::path prepare_out_dir(const GlobalOptions& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

void finish(const GlobalOptions& g, const fs::path& dir, const std::string& command,
            std::chrono::steady_clock::time_point t0) {
  RunManifest manifest;
  manifest.command = command;
  manifest.seed = g.seed;
  manifest.mode = to_string(g.mode());
  manifest.threads = g.serial ? 1 : max_threads();
  manifest.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest.version = kVersion;
  write_manifest(dir / "manifest.json", manifest);
}

int cmd_catalog(const GlobalOptions& g, const std::string& id) {
  const Pmf p = catalog(id);
  std::printf("%s\n", pmf_to_json_string(p).c_str());
  if (g.out_dir != ".") {
    const auto dir = prepare_out_dir(g);
    write_pmf_json(dir / ("pmf_" + id + ".json"), p);
  }
  return 0;
}

int cmd_estimate(const GlobalOptions& g, const std::string& sample_path) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = prepare_out_dir(g);

  const Sample sample = read_sample_file(sample_path);
  const auto fit = lse(sample);
  const Pmf p_n = empirical_pmf(sample);
  const double scale = std::sqrt(static_cast<double>(sample.n()));

  // Report the certificate at the requested tolerance (the fit itself is
  // accepted at the solver's own precision).
  std::vector<double> padded(static_cast<std::size_t>(fit.grid_end) + 1, 0.0);
  std::copy(fit.p_hat.mass().begin(), fit.p_hat.mass().end(), padded.begin());
  const Certificate cert = fenchel_check(padded, p_n, g.tol);

  {
    CsvWriter csv(dir / "pmf_fit.csv");
    csv.row({"k", "p_hat", "p_n"});
    const int top = std::max(fit.p_hat.support_end(), p_n.support_end());
    for (int k = 0; k <= top; ++k) {
      csv.row({CsvWriter::number(static_cast<long long>(k)), CsvWriter::number(fit.p_hat(k)),
               CsvWriter::number(p_n(k))});
    }
  }
  {
    CsvWriter csv(dir / "diagnostic_series.csv");
    csv.row({"z", "sqrt_n_residual", "is_knot"});
    for (std::size_t z = 0; z < cert.residuals.size(); ++z) {
      const bool is_knot =
          std::binary_search(cert.knots.begin(), cert.knots.end(), static_cast<int>(z));
      csv.row({CsvWriter::number(static_cast<long long>(z)),
               CsvWriter::number(scale * cert.residuals[z]), is_knot ? "1" : "0"});
    }
  }
  {
    CsvWriter csv(dir / "knots.csv");
    csv.row({"knot"});
    for (int k : cert.knots) csv.row({CsvWriter::number(static_cast<long long>(k))});
  }
  {
    CsvWriter csv(dir / "certificate.csv");
    csv.row({"min_residual", "max_knot_gap", "tol", "passes", "grid_end", "n"});
    csv.row({CsvWriter::number(cert.min_residual), CsvWriter::number(cert.max_knot_gap),
             CsvWriter::number(cert.tol), cert.passes() ? "1" : "0",
             CsvWriter::number(static_cast<long long>(fit.grid_end)),
             CsvWriter::number(static_cast<long long>(sample.n()))});
  }
  finish(g, dir, "estimate " + sample_path, t0);
  std::printf("estimate: n=%d, support end %d, %zu knots, certificate %s -> %s\n", sample.n(),
              fit.p_hat.support_end(), cert.knots.size(),
              cert.passes() ? "passed" : "FAILED", dir.string().c_str());
  return cert.passes() ? 0 : 1;
}

int cmd_limit_sample(const GlobalOptions& g, const std::string& pmf_spec, int n_draws) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = prepare_out_dir(g);

  const Pmf p0 = load_pmf(pmf_spec);
  DykstraOptions opts;
  opts.feasibility_tol = g.tol > 0 ? std::min(g.tol, 1e-9) : 1e-9;
  const auto draws = sample_limit_distribution(p0, n_draws, g.seed, g.mode(), opts);

  CsvWriter csv(dir / "limit_samples.csv");
  csv.row({"draw", "k", "w", "g_hat", "G_hat", "H_hat"});
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& ls = draws[i];
    for (std::size_t k = 0; k < ls.g_hat.size(); ++k) {
      csv.row({CsvWriter::number(static_cast<long long>(i)),
               CsvWriter::number(static_cast<long long>(k)), CsvWriter::number(ls.w[k]),
               CsvWriter::number(ls.g_hat[k]), CsvWriter::number(ls.G_hat[k]),
               CsvWriter::number(ls.H_hat[k])});
    }
  }
  finish(g, dir, "limit-sample " + pmf_spec, t0);
  std::printf("limit-sample: %d draws from the weak limit for %s -> %s\n", n_draws,
              pmf_spec.c_str(), dir.string().c_str());
  return 0;
}

ExperimentConfig load_config(const GlobalOptions& g, const std::string& config_path,
                             bool seed_given) {
  ExperimentConfig cfg = read_config_json(config_path);
  if (seed_given) cfg.seed = g.seed;
  if (g.full_scale) cfg.apply_full_scale();
  if (g.serial) cfg.mode = ExecMode::Serial;
  return cfg;
}

int cmd_knot_capture(const GlobalOptions& g, const std::string& config_path, bool seed_given) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = prepare_out_dir(g);
  const auto cfg = load_config(g, config_path, seed_given);

  const auto report = knot_capture_experiment(cfg);
  CsvWriter csv(dir / "knot_capture.csv");
  csv.row({"pmf", "n", "replications", "captured", "excluded", "frequency_pct"});
  for (const auto& cell : report.cells) {
    csv.row({cell.pmf, CsvWriter::number(static_cast<long long>(cell.sample_size)),
             CsvWriter::number(static_cast<long long>(cell.replications)),
             CsvWriter::number(static_cast<long long>(cell.captured)),
             CsvWriter::number(static_cast<long long>(cell.excluded)),
             CsvWriter::number(cell.frequency_pct)});
    std::printf("  %-4s n=%-7d capture %6.2f%% (%d excluded)\n", cell.pmf.c_str(),
                cell.sample_size, cell.frequency_pct, cell.excluded);
  }
  finish(g, dir, "knot-capture " + config_path, t0);
  return 0;
}

int cmd_convergence(const GlobalOptions& g, const std::string& config_path, bool seed_given) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto dir = prepare_out_dir(g);
  const auto cfg = load_config(g, config_path, seed_given);

  const auto report = convergence_experiment(cfg);
  {
    CsvWriter csv(dir / "convergence_d.csv");
    csv.row({"pmf", "n", "repetition", "d"});
    for (const auto& cell : report.cells) {
      for (std::size_t rep = 0; rep < cell.d_values.size(); ++rep) {
        csv.row({cell.pmf, CsvWriter::number(static_cast<long long>(cell.sample_size)),
                 CsvWriter::number(static_cast<long long>(rep)),
                 CsvWriter::number(cell.d_values[rep])});
      }
    }
  }
  {
    CsvWriter csv(dir / "convergence_summary.csv");
    csv.row({"pmf", "n", "min", "q1", "median", "q3", "max"});
    for (const auto& cell : report.cells) {
      csv.row({cell.pmf, CsvWriter::number(static_cast<long long>(cell.sample_size)),
               CsvWriter::number(cell.summary.min), CsvWriter::number(cell.summary.q1),
               CsvWriter::number(cell.summary.median), CsvWriter::number(cell.summary.q3),
               CsvWriter::number(cell.summary.max)});
      std::printf("  %-4s n=%-7d median D %.4f [%.4f, %.4f]\n", cell.pmf.c_str(),
                  cell.sample_size, cell.summary.median, cell.summary.min, cell.summary.max);
    }
  }
  finish(g, dir, "convergence " + config_path, t0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex least-squares estimation of a discrete pmf and its weak limit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Master seed for all randomness");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--tol", g.tol, "Certificate tolerance")->capture_default_str();
  app.add_flag("--full-scale", g.full_scale, "Published protocol: M=1000, M'=5000, 100 reps");
  app.add_flag("--serial", g.serial, "Run replication loops on one thread");

  std::string sample_path, pmf_spec, config_path, catalog_id;
  int n_draws = 1000;

  auto* estimate = app.add_subcommand("estimate", "Fit the convex LSE to a sample file");
  estimate->add_option("sample-file", sample_path, "Sample: integers or {\"counts\": ...} JSON")
      ->required();

  auto* limit = app.add_subcommand("limit-sample", "Draw from the weak limit of the LSE error");
  limit->add_option("--pmf", pmf_spec, "Catalog id (p0..p5) or pmf JSON file")->required();
  limit->add_option("-N,--draws", n_draws, "Number of draws")->capture_default_str();

  auto* capture = app.add_subcommand("knot-capture", "Frequency of capturing the true knots");
  capture->add_option("--config", config_path, "Experiment config JSON")->required();

  auto* conv = app.add_subcommand("convergence", "D-statistic study against the weak limit");
  conv->add_option("--config", config_path, "Experiment config JSON")->required();

  auto* cat = app.add_subcommand("catalog", "Print a built-in pmf as JSON");
  cat->add_option("id", catalog_id, "One of p0..p5")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) return cmd_estimate(g, sample_path);
    if (*limit) return cmd_limit_sample(g, pmf_spec, n_draws);
    if (*capture) return cmd_knot_capture(g, config_path, seed_opt->count() > 0);
    if (*conv) return cmd_convergence(g, config_path, seed_opt->count() > 0);
    if (*cat) return cmd_catalog(g, catalog_id);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
