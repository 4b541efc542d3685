#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "convexlse/catalog.hpp"
#include "convexlse/estimator.hpp"
#include "convexlse/kkt_oracle.hpp"
#include "convexlse/parallel.hpp"
#include "convexlse/sampling.hpp"

using namespace convexlse;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> padded(const std::vector<double>& mass, std::size_t len) {
  std::vector<double> y(len, 0.0);
  std::copy(mass.begin(), mass.end(), y.begin());
  return y;
}

}  // namespace

TEST_CASE("empirical pmf") {
  CHECK(empirical_pmf(Sample({0, 0, 1, 2})).mass() == std::vector<double>{0.5, 0.25, 0.25});
  CHECK(empirical_pmf(Sample({0, 0, 1})).mass() == std::vector<double>{2.0 / 3, 1.0 / 3});
  CHECK(empirical_pmf(Sample({5})).mass() == std::vector<double>{0, 0, 0, 0, 0, 1});
  CHECK_THROWS_AS(empirical_pmf(Sample({0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(Sample({}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1, -2}), std::invalid_argument);
}

TEST_CASE("a convex empirical pmf is its own estimate") {
  const auto fit = lse(Sample({0, 0, 1}));
  CHECK(fit.p_hat.mass() == std::vector<double>{2.0 / 3, 1.0 / 3});
  CHECK(fit.certificate.passes());
  for (double r : fit.certificate.residuals) CHECK(std::abs(r) <= 1e-12);
}

TEST_CASE("infeasible empirical pmf projects to the oracle solution") {
  const auto fit = lse(Sample({0, 1, 1}));
  CHECK(fit.grid_end == 5);

  const auto y = padded({1.0 / 3, 2.0 / 3}, 6);
  const auto oracle = kkt_oracle(y, std::vector<ConeSpec>{{0, 5}});
  const auto solved = padded(fit.p_hat.mass(), 6);
  CHECK(sup_diff(solved, oracle) <= 1e-6);

  CHECK(fit.certificate.passes());
  double total = 0.0;
  for (double m : fit.p_hat.mass()) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mass and mean are preserved across random samples") {
  Rng rng(21);
  const Pmf p1 = catalog("p1");
  for (int trial = 0; trial < 25; ++trial) {
    const auto sample = draw_sample(p1, 60 + trial, rng);
    const auto fit = lse(sample);
    const Pmf p_n = empirical_pmf(sample);

    double total = 0.0;
    for (double m : fit.p_hat.mass()) total += m;
    CHECK(std::abs(total - 1.0) <= 1e-8);
    CHECK(std::abs(fit.p_hat.mean() - p_n.mean()) <= 1e-8);
    CHECK(fit.certificate.passes());
    CHECK(is_convex(fit.p_hat, 1e-9));
  }
}

TEST_CASE("certificate passes exactly when the fit matches the oracle") {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> values;
    const int n = 5 + static_cast<int>(rng.uniform() * 20);
    for (int i = 0; i < n; ++i) values.push_back(static_cast<int>(rng.uniform() * 7));
    if (*std::max_element(values.begin(), values.end()) == 0) values[0] = 1;

    const Sample sample(std::move(values));
    const auto fit = lse(sample);
    CHECK(fit.certificate.passes());

    const std::size_t len = 10;
    if (static_cast<std::size_t>(fit.grid_end) + 1 <= len) {
      const Pmf p_n = empirical_pmf(sample);
      const auto oracle =
          kkt_oracle(padded(p_n.mass(), len), std::vector<ConeSpec>{{0, static_cast<int>(len) - 1}});
      CHECK(sup_diff(padded(fit.p_hat.mass(), len), oracle) <= 1e-6);
    }
  }
}

TEST_CASE("sparse samples with a distant top observation") {
  const auto fit = lse(Sample({0, 0, 0, 1, 2, 200}));
  CHECK(fit.certificate.passes());
  CHECK(fit.grid_end >= 204);
  double total = 0.0;
  for (double m : fit.p_hat.mass()) total += m;
  CHECK(std::abs(total - 1.0) <= 1e-8);
  CHECK(is_convex(fit.p_hat, 1e-9));
}

TEST_CASE("estimated support rarely exceeds S+1 at large n") {
  const Pmf p1 = catalog("p1");
  const int reps = 300;
  std::vector<char> inside(reps, 0);
  parallel_for_index(reps, ExecMode::OpenMP, [&](std::size_t rep) {
    Rng rng = Rng::stream(61, 0, rep);
    const auto sample = draw_sample(p1, 51200, rng);
    const auto fit = lse(sample);
    inside[rep] = fit.p_hat.support_end() <= p1.support_end() + 1 ? 1 : 0;
  });
  int count = 0;
  for (char c : inside) count += c;
  CHECK(100.0 * count / reps >= 99.0);
}

TEST_CASE("fenchel_check flags a non-optimal candidate") {
  // Candidate: uniform on {0,1}; data: point mass at 1. The candidate has
  // a knot at z = 2 where the H processes cannot agree.
  const Pmf point_mass({0.0, 1.0});
  const std::vector<double> uniform01{0.5, 0.5};
  const auto cert = fenchel_check(uniform01, point_mass, 1e-8);
  CHECK_FALSE(cert.passes());
  CHECK(cert.max_knot_gap > 1e-3);

  // The optimum itself passes with zero residuals.
  const Pmf convex_emp({2.0 / 3, 1.0 / 3});
  const auto ok = fenchel_check(convex_emp.mass(), convex_emp, 1e-8);
  CHECK(ok.passes());
  for (double r : ok.residuals) CHECK(r == 0.0);
}

TEST_CASE("localized criterion") {
  const Sample sample({0, 1, 1, 3, 3, 3});

  // Full-grid window reproduces the unrestricted estimate.
  const auto fit = lse(sample);
  const auto full = localized_lse(sample, 0, fit.grid_end);
  CHECK(sup_diff(full, padded(fit.p_hat.mass(), full.size())) <= 1e-9);

  // Window where the empirical pmf is already convex.
  const Sample easy({0, 0, 1, 2});
  const auto window = localized_lse(easy, 0, 2);
  CHECK(window == std::vector<double>{0.5, 0.25, 0.25});

  // Window (0,3) against the oracle on that window.
  const auto local = localized_lse(sample, 0, 3);
  const Pmf p_n = empirical_pmf(sample);
  const std::vector<double> y(p_n.mass().begin(), p_n.mass().begin() + 4);
  CHECK(sup_diff(local, kkt_oracle(y, std::vector<ConeSpec>{{0, 3}})) <= 1e-6);

  CHECK_THROWS_AS(localized_lse(sample, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(localized_lse(sample, -1, 3), std::invalid_argument);
}

TEST_CASE("localized gap against the full estimate") {
  // A double knot at {3, 4} localizes the criterion: windows anchored at
  // the knot pair reproduce the full estimate at large n, while a window
  // cut mid-interval generally does not.
  const Pmf p0 = mixture_compose(MixtureWeights({0, 0, 0.4, 0.4, 0, 0, 0.2}));
  Rng rng(71);
  const auto sample = draw_sample(p0, 20000, rng);
  const auto fit = lse(sample);
  CHECK(localized_gap(sample, 0, fit.grid_end) <= 1e-9);
  if (knots(fit.p_hat).is_interior(3) && knots(fit.p_hat).is_interior(4)) {
    CHECK(localized_gap(sample, 0, 3) <= 1e-8);
  }
}

TEST_CASE("h diagnostic") {
  const auto flat = h_diagnostic(Sample({0, 0, 1}));
  for (double v : flat.values) CHECK(std::abs(v) <= 1e-12);

  Rng rng(23);
  const auto sample = draw_sample(catalog("p4"), 80, rng);
  const auto diag = h_diagnostic(sample);
  const double scale = std::sqrt(80.0);
  for (double v : diag.values) CHECK(v >= -1e-8 * scale);
  for (int z : diag.knots) {
    CHECK(std::abs(diag.values[static_cast<std::size_t>(z)]) <= 1e-8 * scale);
  }
}
