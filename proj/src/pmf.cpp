#include "convexlse/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace convexlse {

Pmf::Pmf(std::vector<double> mass, double mass_tol) : mass_(std::move(mass)) {
  if (mass_.size() < 2) {
    throw std::invalid_argument("Pmf: support must contain {0, 1} at least (S >= 1)");
  }
  for (double m : mass_) {
    if (!(m >= 0.0)) throw std::invalid_argument("Pmf: negative or NaN mass");
  }
  if (!(mass_.back() > 0.0)) {
    throw std::invalid_argument("Pmf: mass at the support end must be positive");
  }
  const double total = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  if (std::abs(total - 1.0) > mass_tol) {
    throw std::invalid_argument("Pmf: mass sums to " + std::to_string(total) + ", not 1");
  }
}

double Pmf::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < mass_.size(); ++k) m += static_cast<double>(k) * mass_[k];
  return m;
}

bool KnotSet::is_interior(int s) const {
  return std::binary_search(interior.begin(), interior.end(), s);
}

std::vector<std::pair<int, int>> KnotSet::segments() const {
  std::vector<std::pair<int, int>> segs;
  segs.reserve(interior.size() + 1);
  int prev = 0;
  for (int s : interior) {
    segs.emplace_back(prev, s);
    prev = s;
  }
  segs.emplace_back(prev, last);
  return segs;
}

MixtureWeights::MixtureWeights(std::vector<double> pi, double sum_tol) : pi_(std::move(pi)) {
  if (pi_.empty()) throw std::invalid_argument("MixtureWeights: empty");
  for (double w : pi_) {
    if (!(w >= 0.0)) throw std::invalid_argument("MixtureWeights: negative or NaN weight");
  }
  if (!(pi_.back() > 0.0)) {
    throw std::invalid_argument("MixtureWeights: last weight must be positive");
  }
  const double total = std::accumulate(pi_.begin(), pi_.end(), 0.0);
  if (std::abs(total - 1.0) > sum_tol) {
    throw std::invalid_argument("MixtureWeights: weights sum to " + std::to_string(total) +
                                ", not 1");
  }
  for (double& w : pi_) w /= total;
}

std::vector<double> cdf(const Pmf& p) {
  const auto& mass = p.mass();
  std::vector<double> f(mass.size() + 1);
  double acc = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    acc += mass[k];
    f[k] = acc;
  }
  f[mass.size() - 1] = 1.0;  // F(S) = F(S+1) = 1 exactly
  f[mass.size()] = 1.0;
  return f;
}

double h_process(const Pmf& p, int z) {
  if (z < 0) throw std::invalid_argument("h_process: z must be >= 0");
  const auto f = cdf(p);
  const int s1 = p.support_end() + 1;
  double h = 0.0;
  for (int k = 0; k < std::min(z, s1); ++k) h += f[static_cast<std::size_t>(k)];
  if (z > s1) h += static_cast<double>(z - s1);  // F == 1 beyond S
  return h;
}

double laplacian(std::span<const double> mass, int k) {
  if (k < 1) throw std::invalid_argument("laplacian: k must be >= 1");
  auto at = [&](int i) {
    return (i < 0 || i >= static_cast<int>(mass.size())) ? 0.0
                                                         : mass[static_cast<std::size_t>(i)];
  };
  return at(k + 1) - 2.0 * at(k) + at(k - 1);
}

double laplacian(const Pmf& p, int k) { return laplacian(std::span(p.mass()), k); }

bool is_convex(std::span<const double> mass, double tol) {
  // Beyond len(mass) all three terms read zero, so checking up to the
  // index right past the end covers every k >= 1.
  for (int k = 1; k <= static_cast<int>(mass.size()); ++k) {
    if (laplacian(mass, k) < -tol) return false;
  }
  return true;
}

bool is_convex(const Pmf& p, double tol) { return is_convex(std::span(p.mass()), tol); }

KnotSet knots(const Pmf& p, double tol) {
  KnotSet ks;
  ks.last = p.support_end() + 1;
  for (int k = 1; k <= p.support_end(); ++k) {
    if (laplacian(p, k) > tol) ks.interior.push_back(k);
  }
  return ks;
}

Pmf triangular(int j) {
  if (j < 2) throw std::invalid_argument("triangular: j must be >= 2");
  std::vector<double> mass(static_cast<std::size_t>(j));
  const double denom = static_cast<double>(j) * (j + 1);
  for (int i = 0; i < j; ++i) mass[static_cast<std::size_t>(i)] = 2.0 * (j - i) / denom;
  return Pmf(std::move(mass));
}

std::vector<double> mixture_weights_raw(std::span<const double> mass) {
  const int j_max = static_cast<int>(mass.size());  // S + 1
  std::vector<double> pi(static_cast<std::size_t>(j_max));
  for (int j = 1; j <= j_max; ++j) {
    pi[static_cast<std::size_t>(j - 1)] =
        0.5 * static_cast<double>(j) * (j + 1) * laplacian(mass, j);
  }
  return pi;
}

std::vector<double> mixture_mass_raw(std::span<const double> pi) {
  const int j_max = static_cast<int>(pi.size());  // largest support point + 1
  std::vector<double> mass(static_cast<std::size_t>(std::max(j_max, 1)), 0.0);
  for (int j = 1; j <= j_max; ++j) {
    const double w = pi[static_cast<std::size_t>(j - 1)];
    if (w == 0.0) continue;
    const double denom = static_cast<double>(j) * (j + 1);
    for (int i = 0; i < j && i < static_cast<int>(mass.size()); ++i) {
      mass[static_cast<std::size_t>(i)] += w * 2.0 * (j - i) / denom;
    }
  }
  return mass;
}

MixtureWeights mixture_decompose(const Pmf& p, double tol) {
  if (!is_convex(p, tol)) {
    throw std::invalid_argument("mixture_decompose: pmf is not convex");
  }
  auto pi = mixture_weights_raw(std::span(p.mass()));
  for (double& w : pi) w = std::max(w, 0.0);  // clip the -1e-12-level noise
  return MixtureWeights(std::move(pi));
}

Pmf mixture_compose(const MixtureWeights& w) {
  if (w.max_component() < 2) {
    throw std::invalid_argument("mixture_compose: need a component T_j with j >= 2");
  }
  return Pmf(mixture_mass_raw(std::span(w.pi())));
}

Pmf truncated_geometric(double q, int max_support) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("truncated_geometric: q must lie in (0, 1)");
  }
  if (max_support < 1) throw std::invalid_argument("truncated_geometric: S must be >= 1");
  std::vector<double> mass(static_cast<std::size_t>(max_support) + 1);
  const double scale = (1.0 - q) / (1.0 - std::pow(q, max_support + 1));
  for (int i = 0; i <= max_support; ++i) {
    mass[static_cast<std::size_t>(i)] = scale * std::pow(q, i);
  }
  return Pmf(std::move(mass));
}

double lr_norm(std::span<const double> x, double r) {
  if (r == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (r == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  if (r == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  throw std::invalid_argument("lr_norm: r must be 1, 2 or infinity");
}

std::vector<int> shift_to_origin(std::vector<int> values, int kappa) {
  for (int& v : values) {
    if (v < kappa) throw std::invalid_argument("shift_to_origin: value below kappa");
    v -= kappa;
  }
  return values;
}

std::vector<double> prefix_cdf(std::span<const double> mass, int k_max) {
  std::vector<double> f(static_cast<std::size_t>(k_max) + 1);
  double acc = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    if (k < static_cast<int>(mass.size())) acc += mass[static_cast<std::size_t>(k)];
    f[static_cast<std::size_t>(k)] = acc;
  }
  return f;
}

std::vector<double> h_sequence(std::span<const double> mass, int z_max) {
  const auto f = prefix_cdf(mass, std::max(z_max - 1, 0));
  std::vector<double> h(static_cast<std::size_t>(z_max) + 1);
  h[0] = 0.0;
  for (int z = 1; z <= z_max; ++z) {
    h[static_cast<std::size_t>(z)] = h[static_cast<std::size_t>(z - 1)] + f[static_cast<std::size_t>(z - 1)];
  }
  return h;
}

}  // namespace convexlse
