#include "convexlse/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "convexlse/sampling.hpp"
#include "convexlse/serialize.hpp"

namespace convexlse {

namespace {

constexpr std::uint64_t kKnotCaptureTag = 0x4b43ull;       // knot-capture substream
constexpr std::uint64_t kConvergenceErrTag = 0x4345ull;    // estimation-error substream
constexpr std::uint64_t kConvergenceLimitTag = 0x434cull;  // limit-draw master seeds

std::uint64_t cell_stream(std::uint64_t tag, std::size_t pmf_idx, std::size_t size_idx,
                          std::size_t extra = 0) {
  return (tag << 48) ^ (static_cast<std::uint64_t>(pmf_idx) << 36) ^
         (static_cast<std::uint64_t>(size_idx) << 24) ^ static_cast<std::uint64_t>(extra);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool contains_all(const std::vector<int>& haystack, const std::vector<int>& needles) {
  return std::includes(haystack.begin(), haystack.end(), needles.begin(), needles.end());
}

}  // namespace

void ExperimentConfig::apply_full_scale() {
  replications = 1000;
  limit_draws = 5000;
  repetitions = 100;
}

void ExperimentConfig::validate() const {
  if (pmfs.empty()) throw std::invalid_argument("config: no pmfs listed");
  if (sample_sizes.empty()) throw std::invalid_argument("config: no sample sizes listed");
  for (int n : sample_sizes) {
    if (n < 1) throw std::invalid_argument("config: sample sizes must be >= 1");
  }
  if (replications < 1 || limit_draws < 1 || repetitions < 1) {
    throw std::invalid_argument("config: replications, limit_draws, repetitions must be >= 1");
  }
  if (!(grid_step > 0.0) || !(grid_lo < grid_hi)) {
    throw std::invalid_argument("config: need grid_lo < grid_hi and grid_step > 0");
  }
}

KnotCaptureReport knot_capture_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  KnotCaptureReport report;
  report.seed = cfg.seed;
  for (std::size_t pi = 0; pi < cfg.pmfs.size(); ++pi) {
    const Pmf p0 = load_pmf(cfg.pmfs[pi]);
    const std::vector<int> true_interior = knots(p0).interior;
    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
      const int n = cfg.sample_sizes[ni];
      std::vector<signed char> outcome(static_cast<std::size_t>(cfg.replications), 0);
      parallel_for_index(outcome.size(), cfg.mode, [&](std::size_t rep) {
        Rng rng = Rng::stream(cfg.seed, cell_stream(kKnotCaptureTag, pi, ni), rep);
        const Sample sample = draw_sample(p0, n, rng);
        try {
          const auto fit = lse(sample);
          outcome[rep] = contains_all(fit.knot_set.interior, true_interior) ? 1 : 0;
        } catch (const CertificateFailure&) {
          outcome[rep] = -1;  // excluded from the frequency, reported
        } catch (const std::exception& e) {
          throw std::runtime_error("knot-capture replication " + std::to_string(rep) + " (" +
                                   cfg.pmfs[pi] + ", n=" + std::to_string(n) + "): " + e.what());
        }
      });

      KnotCaptureCell cell;
      cell.pmf = cfg.pmfs[pi];
      cell.sample_size = n;
      cell.replications = cfg.replications;
      for (signed char o : outcome) {
        if (o == 1) ++cell.captured;
        if (o == -1) ++cell.excluded;
      }
      const int valid = cell.replications - cell.excluded;
      cell.frequency_pct = valid > 0 ? 100.0 * cell.captured / valid : 0.0;
      report.cells.push_back(std::move(cell));
    }
  }
  report.elapsed_seconds = seconds_since(t0);
  return report;
}

FiveNumberSummary five_number_summary(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("five_number_summary: empty input");
  std::sort(xs.begin(), xs.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(xs.size() - 1);
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= xs.size()) return xs.back();
    return xs[i] + (h - static_cast<double>(i)) * (xs[i + 1] - xs[i]);
  };
  return FiveNumberSummary{xs.front(), quantile(0.25), quantile(0.5), quantile(0.75), xs.back()};
}

double sup_cdf_distance(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b, double grid_lo, double grid_hi,
                        double grid_step) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sup_cdf_distance: coordinate counts differ");
  }
  const int steps = static_cast<int>(std::llround((grid_hi - grid_lo) / grid_step));
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto& va = a[j];
    const auto& vb = b[j];
    if (va.empty() || vb.empty()) throw std::invalid_argument("sup_cdf_distance: empty cdf");
    for (int t = 0; t <= steps; ++t) {
      const double x = grid_lo + grid_step * t;
      const double fa =
          static_cast<double>(std::upper_bound(va.begin(), va.end(), x) - va.begin()) /
          static_cast<double>(va.size());
      const double fb =
          static_cast<double>(std::upper_bound(vb.begin(), vb.end(), x) - vb.begin()) /
          static_cast<double>(vb.size());
      d = std::max(d, std::abs(fa - fb));
    }
  }
  return d;
}

ConvergenceReport convergence_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  ConvergenceReport report;
  report.seed = cfg.seed;
  report.replications = cfg.replications;
  report.limit_draws = cfg.limit_draws;
  report.repetitions = cfg.repetitions;

  for (std::size_t pi = 0; pi < cfg.pmfs.size(); ++pi) {
    const Pmf p0 = load_pmf(cfg.pmfs[pi]);
    const int dim = p0.support_end() + 2;  // coordinates 0..S+1

    // The limit sample is drawn once per pmf; its per-coordinate empirical
    // cdfs are fixed targets reused by every repetition and sample size.
    const auto limit_draws = sample_limit_distribution(
        p0, cfg.limit_draws, derive_seed(cfg.seed, kConvergenceLimitTag, pi), cfg.mode);
    std::vector<std::vector<double>> limit_sorted(static_cast<std::size_t>(dim));
    for (auto& column : limit_sorted) column.reserve(limit_draws.size());
    for (const auto& draw : limit_draws) {
      for (int j = 0; j < dim; ++j) {
        limit_sorted[static_cast<std::size_t>(j)].push_back(draw.g_hat[static_cast<std::size_t>(j)]);
      }
    }
    for (auto& column : limit_sorted) std::sort(column.begin(), column.end());

    for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
      const int n = cfg.sample_sizes[ni];
      const double root_n = std::sqrt(static_cast<double>(n));
      const std::size_t m = static_cast<std::size_t>(cfg.replications);
      const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);

      std::vector<double> errors(reps * m * static_cast<std::size_t>(dim));
      parallel_for_index(reps * m, cfg.mode, [&](std::size_t t) {
        const std::size_t rep_out = t / m;
        Rng rng = Rng::stream(cfg.seed, cell_stream(kConvergenceErrTag, pi, ni, rep_out), t % m);
        const Sample sample = draw_sample(p0, n, rng);
        try {
          const auto fit = lse(sample);
          for (int j = 0; j < dim; ++j) {
            errors[t * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)] =
                root_n * (fit.p_hat(j) - p0(j));
          }
        } catch (const CertificateFailure& e) {
          throw std::runtime_error("convergence replication " + std::to_string(t) + " (n=" +
                                   std::to_string(n) + "): " + e.what());
        }
      });

      ConvergenceCell cell;
      cell.pmf = cfg.pmfs[pi];
      cell.sample_size = n;
      cell.d_values.reserve(reps);
      std::vector<std::vector<double>> err_sorted(static_cast<std::size_t>(dim));
      for (std::size_t rep_out = 0; rep_out < reps; ++rep_out) {
        for (int j = 0; j < dim; ++j) {
          auto& column = err_sorted[static_cast<std::size_t>(j)];
          column.clear();
          column.reserve(m);
          for (std::size_t i = 0; i < m; ++i) {
            column.push_back(errors[(rep_out * m + i) * static_cast<std::size_t>(dim) +
                                    static_cast<std::size_t>(j)]);
          }
          std::sort(column.begin(), column.end());
        }
        cell.d_values.push_back(
            sup_cdf_distance(err_sorted, limit_sorted, cfg.grid_lo, cfg.grid_hi, cfg.grid_step));
      }
      cell.summary = five_number_summary(cell.d_values);
      report.cells.push_back(std::move(cell));
    }
  }
  report.elapsed_seconds = seconds_since(t0);
  return report;
}

}  // namespace convexlse
