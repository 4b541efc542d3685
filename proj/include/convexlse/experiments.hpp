#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "convexlse/limit_law.hpp"
#include "convexlse/parallel.hpp"
#include "convexlse/pmf.hpp"

namespace convexlse {

struct ExperimentConfig {
  std::vector<std::string> pmfs;    // catalog ids or pmf JSON files
  std::vector<int> sample_sizes;
  int replications = 200;           // M: estimation-error replications
  int limit_draws = 1000;           // M': weak-limit draws
  int repetitions = 20;             // repetitions of the D statistic
  std::uint64_t seed = 1;
  double grid_lo = -3.0;            // evaluation grid for the D statistic
  double grid_hi = 3.0;
  double grid_step = 0.01;
  ExecMode mode = ExecMode::OpenMP;

  // The scale used for the published tables: M = 1000, M' = 5000, 100
  // repetitions.
  void apply_full_scale();
  void validate() const;
};

// One (pmf, n) cell of the knot-capture study: how often the estimator's
// knots contain every interior knot of the truth. Replications whose
// certificate fails are excluded from the denominator and counted.
struct KnotCaptureCell {
  std::string pmf;
  int sample_size = 0;
  int replications = 0;
  int captured = 0;
  int excluded = 0;
  double frequency_pct = 0.0;
};

struct KnotCaptureReport {
  std::vector<KnotCaptureCell> cells;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;
};

KnotCaptureReport knot_capture_experiment(const ExperimentConfig& cfg);

struct FiveNumberSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

FiveNumberSummary five_number_summary(std::vector<double> xs);

// One (pmf, n) cell of the convergence study: repetitions of the sup
// distance D between the empirical laws of the scaled estimation error
// and of the weak limit, the latter drawn once per pmf and reused.
struct ConvergenceCell {
  std::string pmf;
  int sample_size = 0;
  std::vector<double> d_values;
  FiveNumberSummary summary;
};

struct ConvergenceReport {
  std::vector<ConvergenceCell> cells;
  std::uint64_t seed = 0;
  int replications = 0;
  int limit_draws = 0;
  int repetitions = 0;
  double elapsed_seconds = 0.0;
};

ConvergenceReport convergence_experiment(const ExperimentConfig& cfg);

// Sup over coordinates and over the evaluation grid of the distance
// between the two per-coordinate empirical cdfs. Both outer vectors are
// indexed by coordinate; inner vectors must be sorted.
double sup_cdf_distance(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b, double grid_lo,
                        double grid_hi, double grid_step);

}  // namespace convexlse
