#pragma once

#include <cstdint>
#include <vector>

#include "convexlse/parallel.hpp"
#include "convexlse/pmf.hpp"
#include "convexlse/projection.hpp"
#include "convexlse/rng.hpp"

namespace convexlse {

// One draw of the Gaussian vector W on {0..S+1}: increments of a Brownian
// bridge composed with the cdf of the true pmf. By construction
// w[S+1] == 0 exactly and the entries sum to zero up to rounding.
struct GaussianSample {
  std::vector<double> w;
};

GaussianSample simulate_w(const Pmf& p0, Rng& rng);

// Evaluated characterization of the weak-limit minimizer: the candidate
// must be convex strictly inside every knot interval, and the residual
// process H_hat - H must be nonnegative on {0..S+2} with equality at the
// knot boundaries, at S+2, and at every knot the minimizer grows inside a
// cone.
struct LimitCertificate {
  std::vector<double> residuals;     // indexed by x = 0..S+2
  std::vector<int> equality_points;
  double min_residual = 0.0;
  double max_equality_gap = 0.0;
  double min_laplacian = 0.0;        // over the cone interiors
  double tol = 1e-8;

  bool passes() const {
    return min_residual >= -tol && max_equality_gap <= tol && min_laplacian >= -tol;
  }
};

struct LimitSample {
  std::vector<double> w;      // the projected Gaussian vector, 0..S+1
  std::vector<double> g_hat;  // 0..S+1
  std::vector<double> G_hat;  // 0..S+1, prefix sums of g_hat
  std::vector<double> H_hat;  // 0..S+2, prefix sums of G_hat, H_hat[0] = 0
  LimitCertificate certificate;
};

// Minimizer of sum_k (g(k) - w(k))^2 over the sequences convex between
// consecutive knots of K, via cyclic projections onto the per-interval
// cones. Intervals of consecutive knots are skipped outright; with no
// working interval the minimizer is w itself.
LimitSample limit_minimizer(const GaussianSample& w, const KnotSet& K,
                            const DykstraOptions& opts = {});

LimitCertificate certificate_limit(const LimitSample& ls, const GaussianSample& w,
                                   const KnotSet& K, double tol = 1e-8);

// Minimizers of the criterion truncated to {0..s} (cones ending at or
// before s) and to {s..S+1} (cones starting at or after s); s must be an
// interior knot.
std::vector<double> localized_left(const GaussianSample& w, const KnotSet& K, int s,
                                   const DykstraOptions& opts = {});
std::vector<double> localized_right(const GaussianSample& w, const KnotSet& K, int s,
                                    const DykstraOptions& opts = {});

// n_draws independent (simulate_w -> limit_minimizer) draws; draw i uses
// its own generator derived from (master_seed, i), so the output does not
// depend on the execution mode or thread count.
std::vector<LimitSample> sample_limit_distribution(const Pmf& p0, int n_draws,
                                                   std::uint64_t master_seed,
                                                   ExecMode mode = ExecMode::OpenMP,
                                                   const DykstraOptions& opts = {});

}  // namespace convexlse
