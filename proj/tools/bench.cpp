// Timing comparison of the serial reference path against the OpenMP path
// for the two replication-heavy kernels. Outputs must agree bit for bit;
// the speedup is what this tool measures.

#include <chrono>
#include <cstdio>
#include <string>

#include "convexlse/catalog.hpp"
#include "convexlse/experiments.hpp"
#include "convexlse/limit_law.hpp"

using namespace convexlse;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename Fn>
double timed(Fn&& fn) {
  const double t0 = now_seconds();
  fn();
  return now_seconds() - t0;
}

void report(const char* kernel, double serial_s, double openmp_s, bool identical) {
  std::printf("%-28s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   identical: %s\n", kernel,
              serial_s, openmp_s, serial_s / openmp_s, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  std::printf("threads available: %d (scale %d)\n", max_threads(), scale);

  {
    const Pmf p1 = catalog("p1");
    const int draws = 20000 * scale;
    sample_limit_distribution(p1, 1000, 42, ExecMode::OpenMP);  // warmup
    std::vector<LimitSample> serial_out, openmp_out;
    const double ts = timed([&] {
      serial_out = sample_limit_distribution(p1, draws, 42, ExecMode::Serial);
    });
    const double tp = timed([&] {
      openmp_out = sample_limit_distribution(p1, draws, 42, ExecMode::OpenMP);
    });
    bool same = serial_out.size() == openmp_out.size();
    for (std::size_t i = 0; same && i < serial_out.size(); ++i) {
      same = serial_out[i].g_hat == openmp_out[i].g_hat;
    }
    report("limit sampling (p1)", ts, tp, same);
  }

  {
    ExperimentConfig cfg;
    cfg.pmfs = {"p1"};
    cfg.sample_sizes = {3200};
    cfg.replications = 500 * scale;
    cfg.seed = 42;

    ExperimentConfig warm = cfg;
    warm.replications = 20;
    knot_capture_experiment(warm);

    cfg.mode = ExecMode::Serial;
    KnotCaptureReport serial_report, openmp_report;
    const double ts = timed([&] { serial_report = knot_capture_experiment(cfg); });
    cfg.mode = ExecMode::OpenMP;
    const double tp = timed([&] { openmp_report = knot_capture_experiment(cfg); });
    const bool same =
        serial_report.cells.at(0).captured == openmp_report.cells.at(0).captured &&
        serial_report.cells.at(0).excluded == openmp_report.cells.at(0).excluded;
    report("knot capture (p1, n=3200)", ts, tp, same);
  }

  {
    ExperimentConfig cfg;
    cfg.pmfs = {"p0"};
    cfg.sample_sizes = {1000};
    cfg.replications = 100 * scale;
    cfg.limit_draws = 500 * scale;
    cfg.repetitions = 10;
    cfg.seed = 42;

    cfg.mode = ExecMode::Serial;
    ConvergenceReport serial_report, openmp_report;
    const double ts = timed([&] { serial_report = convergence_experiment(cfg); });
    cfg.mode = ExecMode::OpenMP;
    const double tp = timed([&] { openmp_report = convergence_experiment(cfg); });
    const bool same = serial_report.cells.at(0).d_values == openmp_report.cells.at(0).d_values;
    report("convergence (p0, n=1000)", ts, tp, same);
  }

  return 0;
}
