#include "convexlse/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "convexlse/projection.hpp"

namespace convexlse {

Sample::Sample(std::vector<int> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("Sample: need at least one observation");
  for (int x : values) {
    if (x < 0) throw std::invalid_argument("Sample: negative observation");
  }
}

int Sample::max_value() const { return *std::max_element(values.begin(), values.end()); }

Pmf empirical_pmf(const Sample& s) {
  const int top = s.max_value();
  if (top == 0) {
    throw std::invalid_argument("empirical_pmf: all observations are 0 (Dirac at the origin)");
  }
  std::vector<long long> counts(static_cast<std::size_t>(top) + 1, 0);
  for (int x : s.values) ++counts[static_cast<std::size_t>(x)];
  std::vector<double> mass(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    mass[j] = static_cast<double>(counts[j]) / static_cast<double>(s.n());
  }
  return Pmf(std::move(mass));
}

Certificate fenchel_check(std::span<const double> p_hat, const Pmf& p_n, double tol) {
  Certificate cert;
  cert.tol = tol;

  const int z_max =
      std::max(static_cast<int>(p_hat.size()), p_n.support_end() + 1) + 1;
  const auto h_hat = h_sequence(p_hat, z_max);
  const auto h_emp = h_sequence(std::span(p_n.mass()), z_max);

  cert.residuals.resize(static_cast<std::size_t>(z_max) + 1);
  cert.min_residual = 0.0;
  for (int z = 0; z <= z_max; ++z) {
    const double r = h_hat[static_cast<std::size_t>(z)] - h_emp[static_cast<std::size_t>(z)];
    cert.residuals[static_cast<std::size_t>(z)] = r;
    cert.min_residual = std::min(cert.min_residual, r);
  }

  // Knots of the zero-extended candidate; the extension can only add a
  // knot at one past the stored end.
  for (int k = 1; k <= static_cast<int>(p_hat.size()); ++k) {
    if (laplacian(p_hat, k) > tol) {
      cert.knots.push_back(k);
      const double gap = cert.residuals[static_cast<std::size_t>(k)];
      cert.knot_gaps.push_back(gap);
      cert.max_knot_gap = std::max(cert.max_knot_gap, std::abs(gap));
    }
  }
  return cert;
}

namespace {

// Pad the empirical mass with zeros out to grid index `grid_end`.
std::vector<double> padded_empirical(const Pmf& p_n, int grid_end) {
  std::vector<double> y(static_cast<std::size_t>(grid_end) + 1, 0.0);
  std::copy(p_n.mass().begin(), p_n.mass().end(), y.begin());
  return y;
}

}  // namespace

LseResult lse(const Sample& s, int buffer) {
  if (buffer < 1) throw std::invalid_argument("lse: buffer must be >= 1");
  const Pmf p_n = empirical_pmf(s);
  const int top = s.max_value();

  constexpr int kMaxGrowths = 12;
  double min_residual_seen = 0.0;
  for (int attempt = 0; attempt < kMaxGrowths; ++attempt, buffer *= 2) {
    const int grid_end = top + buffer;
    const auto y = padded_empirical(p_n, grid_end);
    auto g = project_convex(y, ConeSpec{0, grid_end});

    // The solution must extend by zeros into a sequence that is convex on
    // all of N: no trailing mass, and the two boundary second differences
    // of the extension stay nonnegative.
    const double tail = g[static_cast<std::size_t>(grid_end)];
    const bool tail_ok = std::abs(tail) <= 1e-12;
    const bool boundary_ok =
        (g[static_cast<std::size_t>(grid_end - 1)] - 2.0 * tail >= -1e-9) && (tail >= -1e-9);

    auto cert = fenchel_check(g, p_n, 1e-8);
    min_residual_seen = std::min(min_residual_seen, cert.min_residual);
    if (!(tail_ok && boundary_ok && cert.passes())) continue;

    // Trim exact-zero tail entries and clear solver-precision negatives.
    int end = grid_end;
    while (end > 1 && g[static_cast<std::size_t>(end)] <= 1e-12) --end;
    std::vector<double> mass(g.begin(), g.begin() + end + 1);
    for (double& m : mass) {
      if (m < 0.0) {
        if (m < -1e-9) throw CertificateFailure("lse: projection produced negative mass");
        m = 0.0;
      }
    }
    Pmf p_hat(std::move(mass), 1e-8);
    auto ks = knots(p_hat, 1e-8);
    return LseResult{std::move(p_hat), grid_end, std::move(ks), std::move(cert)};
  }
  throw CertificateFailure("lse: no grid satisfied the optimality certificate (min residual " +
                           std::to_string(min_residual_seen) + ")");
}

std::vector<double> localized_lse(const Sample& s, int z, int z_prime) {
  if (!(0 <= z && z < z_prime)) {
    throw std::invalid_argument("localized_lse: need 0 <= z < z'");
  }
  const Pmf p_n = empirical_pmf(s);
  std::vector<double> window(static_cast<std::size_t>(z_prime - z) + 1);
  for (int k = z; k <= z_prime; ++k) window[static_cast<std::size_t>(k - z)] = p_n(k);
  return project_convex(std::move(window), ConeSpec{0, z_prime - z});
}

double localized_gap(const Sample& s, int z, int z_prime) {
  const auto window = localized_lse(s, z, z_prime);
  const auto full = lse(s);
  double gap = 0.0;
  for (int k = z; k <= z_prime; ++k) {
    gap = std::max(gap, std::abs(window[static_cast<std::size_t>(k - z)] - full.p_hat(k)));
  }
  return gap;
}

HDiagnostic h_diagnostic(const Sample& s) {
  const auto result = lse(s);
  HDiagnostic diag;
  diag.n = s.n();
  diag.knots = result.certificate.knots;
  const double scale = std::sqrt(static_cast<double>(s.n()));
  diag.values.reserve(result.certificate.residuals.size());
  for (double r : result.certificate.residuals) diag.values.push_back(scale * r);
  return diag;
}

}  // namespace convexlse
