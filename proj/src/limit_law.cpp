#include "convexlse/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace convexlse {

namespace {

// Partial-sum construction: with V_k ~ N(0, p0(k)) independent and
// T = sum_k V_k, the vector w(k) = V_k - p0(k) T has the dispersion
// p0(i) 1{i=j} - p0(i) p0(j) of Brownian-bridge increments, and the
// boundary value w(S+1) = 0 holds exactly.
void simulate_w_into(const Pmf& p0, Rng& rng, std::vector<double>& w) {
  const auto& mass = p0.mass();
  w.resize(mass.size() + 1);
  double total = 0.0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    w[k] = std::sqrt(mass[k]) * rng.normal();
    total += w[k];
  }
  for (std::size_t k = 0; k < mass.size(); ++k) w[k] -= mass[k] * total;
  w.back() = 0.0;
}

std::vector<ConeSpec> cones_from_knots(const KnotSet& K, int grid_last) {
  if (K.last != grid_last) {
    throw std::invalid_argument("knot set ends at " + std::to_string(K.last) +
                                " but the grid ends at " + std::to_string(grid_last));
  }
  std::vector<ConeSpec> cones;
  int prev = 0;
  for (int s : K.interior) {
    cones.emplace_back(ConeSpec{prev, s});
    prev = s;
  }
  cones.emplace_back(ConeSpec{prev, grid_last});
  return cones;
}

void project_onto_cones_inplace(std::vector<double>& y, std::span<const ConeSpec> cones,
                                const DykstraOptions& opts) {
  std::size_t n_active = 0;
  const ConeSpec* only = nullptr;
  for (const auto& c : cones) {
    if (!c.vacuous()) {
      only = &c;
      ++n_active;
    }
  }
  if (n_active == 0) return;
  if (n_active == 1) {
    project_convex_inplace(y, *only);
    return;
  }
  dykstra_project_inplace(y, cones, opts);
}

// The residual certificate, written into `cert` without allocating once
// the buffers are warm. The cone list doubles as the segment [s_j, s_{j+1}]
// list, so the equality set is its endpoints, S+2, and every knot the
// candidate grows strictly inside a cone.
void certificate_into(const LimitSample& ls, const std::vector<double>& w,
                      std::span<const ConeSpec> cones, double tol, LimitCertificate& cert) {
  const int last = static_cast<int>(w.size()) - 1;  // S + 1
  cert.tol = tol;
  cert.min_residual = 0.0;
  cert.max_equality_gap = 0.0;
  cert.min_laplacian = 0.0;

  // H is the double partial sum of w (the bridge evaluated at the cdf);
  // accumulate it on the fly against H_hat.
  cert.residuals.resize(w.size() + 1);
  cert.residuals[0] = 0.0;
  double bridge = 0.0, h = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    bridge += w[k];
    h += bridge;
    cert.residuals[k + 1] = ls.H_hat[k + 1] - h;
    cert.min_residual = std::min(cert.min_residual, cert.residuals[k + 1]);
  }

  cert.equality_points.clear();
  cert.equality_points.reserve(w.size() + 2);
  cert.equality_points.push_back(0);
  for (const auto& [lo, hi] : cones) {
    for (int x = lo + 1; x <= hi - 1; ++x) {
      const double lap = laplacian(ls.g_hat, x);
      cert.min_laplacian = std::min(cert.min_laplacian, lap);
      if (lap > tol) cert.equality_points.push_back(x);
    }
    cert.equality_points.push_back(hi);
  }
  cert.equality_points.push_back(last + 1);

  for (int x : cert.equality_points) {
    cert.max_equality_gap =
        std::max(cert.max_equality_gap, std::abs(cert.residuals[static_cast<std::size_t>(x)]));
  }
}

void minimize_into(const std::vector<double>& w, std::span<const ConeSpec> cones,
                   const DykstraOptions& opts, double cert_tol, LimitSample& ls) {
  ls.w = w;
  ls.g_hat = w;
  project_onto_cones_inplace(ls.g_hat, cones, opts);

  ls.G_hat.resize(ls.g_hat.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < ls.g_hat.size(); ++k) {
    acc += ls.g_hat[k];
    ls.G_hat[k] = acc;
  }
  ls.H_hat.resize(ls.g_hat.size() + 1);
  ls.H_hat[0] = 0.0;
  for (std::size_t x = 1; x < ls.H_hat.size(); ++x) {
    ls.H_hat[x] = ls.H_hat[x - 1] + ls.G_hat[x - 1];
  }

  certificate_into(ls, w, cones, cert_tol, ls.certificate);
}

}  // namespace

GaussianSample simulate_w(const Pmf& p0, Rng& rng) {
  GaussianSample out;
  simulate_w_into(p0, rng, out.w);
  return out;
}

LimitSample limit_minimizer(const GaussianSample& w, const KnotSet& K,
                            const DykstraOptions& opts) {
  const auto cones = cones_from_knots(K, static_cast<int>(w.w.size()) - 1);
  LimitSample ls;
  minimize_into(w.w, cones, opts, 1e-8, ls);
  return ls;
}

LimitCertificate certificate_limit(const LimitSample& ls, const GaussianSample& w,
                                   const KnotSet& K, double tol) {
  if (ls.g_hat.size() != w.w.size() || ls.H_hat.size() != w.w.size() + 1) {
    throw std::invalid_argument("certificate_limit: candidate and w live on different grids");
  }
  const auto cones = cones_from_knots(K, static_cast<int>(w.w.size()) - 1);
  LimitCertificate cert;
  certificate_into(ls, w.w, cones, tol, cert);
  return cert;
}

std::vector<double> localized_left(const GaussianSample& w, const KnotSet& K, int s,
                                   const DykstraOptions& opts) {
  if (!K.is_interior(s)) {
    throw std::invalid_argument("localized_left: s = " + std::to_string(s) +
                                " is not an interior knot");
  }
  std::vector<ConeSpec> cones;
  for (const auto& [lo, hi] : K.segments()) {
    if (hi <= s) cones.emplace_back(ConeSpec{lo, hi});
  }
  std::vector<double> y(w.w.begin(), w.w.begin() + s + 1);
  project_onto_cones_inplace(y, cones, opts);
  return y;
}

std::vector<double> localized_right(const GaussianSample& w, const KnotSet& K, int s,
                                    const DykstraOptions& opts) {
  if (!K.is_interior(s)) {
    throw std::invalid_argument("localized_right: s = " + std::to_string(s) +
                                " is not an interior knot");
  }
  std::vector<ConeSpec> cones;
  for (const auto& [lo, hi] : K.segments()) {
    if (lo >= s) cones.emplace_back(ConeSpec{lo - s, hi - s});
  }
  std::vector<double> y(w.w.begin() + s, w.w.end());
  project_onto_cones_inplace(y, cones, opts);
  return y;
}

std::vector<LimitSample> sample_limit_distribution(const Pmf& p0, int n_draws,
                                                   std::uint64_t master_seed, ExecMode mode,
                                                   const DykstraOptions& opts) {
  if (n_draws < 1) throw std::invalid_argument("sample_limit_distribution: need n_draws >= 1");
  const KnotSet K = knots(p0);
  const auto cones = cones_from_knots(K, p0.support_end() + 1);
  const std::size_t dim = static_cast<std::size_t>(p0.support_end()) + 2;

  // Result storage is laid out up front; the workers then run without
  // touching the allocator, which would serialize them.
  std::vector<LimitSample> draws(static_cast<std::size_t>(n_draws));
  for (auto& d : draws) {
    d.w.resize(dim);
    d.g_hat.resize(dim);
    d.G_hat.resize(dim);
    d.H_hat.resize(dim + 1);
    d.certificate.residuals.resize(dim + 1);
    d.certificate.equality_points.reserve(dim + 2);
  }

  constexpr std::uint64_t kLimitStream = 0x4c494d4954ull;  // substream tag
  parallel_for_index(static_cast<std::size_t>(n_draws), mode, [&](std::size_t i) {
    Rng rng = Rng::stream(master_seed, kLimitStream, i);
    thread_local std::vector<double> w;
    simulate_w_into(p0, rng, w);
    try {
      minimize_into(w, cones, opts, 1e-8, draws[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("limit draw " + std::to_string(i) + ": " + e.what());
    }
  });
  return draws;
}

}  // namespace convexlse
