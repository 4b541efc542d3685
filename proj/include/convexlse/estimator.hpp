#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "convexlse/pmf.hpp"

namespace convexlse {

// A batch of i.i.d. nonnegative integer observations.
struct Sample {
  std::vector<int> values;

  explicit Sample(std::vector<int> v);
  int n() const { return static_cast<int>(values.size()); }
  int max_value() const;
};

Pmf empirical_pmf(const Sample& s);

// Evaluated optimality conditions for a candidate fit p_hat against the
// empirical pmf p_n: the residual process H_{p_hat} - H_{p_n} must be
// nonnegative everywhere and vanish at every knot of p_hat.
struct Certificate {
  std::vector<double> residuals;  // indexed by z = 0, 1, ...
  std::vector<int> knots;         // knots of p_hat (second difference > tol)
  std::vector<double> knot_gaps;  // residuals at those knots
  double min_residual = 0.0;
  double max_knot_gap = 0.0;
  double tol = 1e-8;

  bool passes() const { return min_residual >= -tol && max_knot_gap <= tol; }
};

Certificate fenchel_check(std::span<const double> p_hat, const Pmf& p_n, double tol = 1e-8);

struct LseResult {
  Pmf p_hat;
  int grid_end = 0;  // solved on {0..grid_end}
  KnotSet knot_set;  // knots of p_hat
  Certificate certificate;
};

// The solved grid never produced a passing certificate; points at a
// solver defect, not at the data.
class CertificateFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Least-squares estimate of a convex pmf: the Euclidean projection of the
// empirical pmf onto the convex sequences. Solved on {0..max(sample)+buffer}
// with the buffer doubled until the zero-extension carries no trailing
// mass and the certificate passes.
LseResult lse(const Sample& s, int buffer = 4);

// Minimizer of the window criterion sum_{k=z}^{z'} (p_n(k) - p(k))^2 over
// sequences convex on {z..z'}; returned on that window. The window
// minimizer coincides with the restriction of the full estimate once n is
// large, provided the window ends sit at double knots of the truth (or at
// the support ends) -- a hypothesis the data cannot certify, so use
// localized_gap to measure the discrepancy on a concrete sample.
std::vector<double> localized_lse(const Sample& s, int z, int z_prime);

// Sup distance between localized_lse(s, z, z') and the full estimate
// restricted to {z..z'}.
double localized_gap(const Sample& s, int z, int z_prime);

// sqrt(n) (H_{p_hat} - H_{p_n}) with the knots of p_hat, ready to plot.
struct HDiagnostic {
  std::vector<double> values;  // indexed by z
  std::vector<int> knots;
  int n = 0;
};

HDiagnostic h_diagnostic(const Sample& s);

}  // namespace convexlse
