#include "convexlse/projection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace convexlse {

NonConvergence::NonConvergence(int cycles, double last_change)
    : std::runtime_error("dykstra_project: no convergence after " + std::to_string(cycles) +
                         " cycles (last full-cycle change " + std::to_string(last_change) + ")"),
      cycles_(cycles),
      last_change_(last_change) {}

namespace {

// Second difference of `x` at interior index k (segment coordinates).
inline double second_diff(const std::vector<double>& x, int k) {
  return x[static_cast<std::size_t>(k + 1)] - 2.0 * x[static_cast<std::size_t>(k)] +
         x[static_cast<std::size_t>(k - 1)];
}

// Scratch buffers reused across projections; Dykstra calls the segment
// solver once per cone per cycle, so the hot path must not allocate.
struct Workspace {
  std::vector<double> x, dir, target, lambda;
  std::vector<int> working;
  std::vector<char> in_working;
  // banded Cholesky of the working-set Gram matrix
  std::vector<double> l0, l1, l2, rhs, mu;
};

// Gram entry for two constraint rows: the rows are shifted (1,-2,1)
// stencils, so the inner product depends only on the index distance.
inline double gram_entry(int dist) {
  switch (dist) {
    case 0: return 6.0;
    case 1: return -4.0;
    case 2: return 1.0;
    default: return 0.0;
  }
}

// Minimizer of ||g - seg||^2 with the working-set constraints held as
// equalities, and its multipliers (sign convention g = seg + A' lambda).
// The sorted working set makes the Gram matrix banded with bandwidth 2;
// it is SPD, so an unpivoted banded Cholesky is enough.
void solve_eqp(const std::vector<double>& seg, Workspace& ws) {
  ws.target = seg;
  const std::size_t m = ws.working.size();
  ws.lambda.assign(m, 0.0);
  if (m == 0) return;

  ws.l0.resize(m);
  ws.l1.resize(m);
  ws.l2.resize(m);
  ws.rhs.resize(m);
  ws.mu.resize(m);

  for (std::size_t j = 0; j < m; ++j) {
    double diag = gram_entry(0);
    if (j >= 1) diag -= ws.l1[j - 1] * ws.l1[j - 1];
    if (j >= 2) diag -= ws.l2[j - 2] * ws.l2[j - 2];
    ws.l0[j] = std::sqrt(diag);
    if (j + 1 < m) {
      double off = gram_entry(ws.working[j + 1] - ws.working[j]);
      if (j >= 1) off -= ws.l2[j - 1] * ws.l1[j - 1];
      ws.l1[j] = off / ws.l0[j];
    }
    if (j + 2 < m) {
      ws.l2[j] = gram_entry(ws.working[j + 2] - ws.working[j]) / ws.l0[j];
    }
  }

  for (std::size_t j = 0; j < m; ++j) ws.rhs[j] = second_diff(seg, ws.working[j]);
  // forward then backward banded substitution
  for (std::size_t j = 0; j < m; ++j) {
    double v = ws.rhs[j];
    if (j >= 1) v -= ws.l1[j - 1] * ws.mu[j - 1];
    if (j >= 2) v -= ws.l2[j - 2] * ws.mu[j - 2];
    ws.mu[j] = v / ws.l0[j];
  }
  for (std::size_t j = m; j-- > 0;) {
    double v = ws.mu[j];
    if (j + 1 < m) v -= ws.l1[j] * ws.mu[j + 1];
    if (j + 2 < m) v -= ws.l2[j] * ws.mu[j + 2];
    ws.mu[j] = v / ws.l0[j];
  }

  for (std::size_t r = 0; r < m; ++r) {
    const int k = ws.working[r];
    const double m_r = ws.mu[r];
    ws.target[static_cast<std::size_t>(k - 1)] -= m_r;
    ws.target[static_cast<std::size_t>(k)] += 2.0 * m_r;
    ws.target[static_cast<std::size_t>(k + 1)] -= m_r;
    ws.lambda[r] = -m_r;
  }
}

// Projection of `seg` onto {g : second_diff(g, k) >= 0, 1 <= k <= n-2},
// in place, by a primal active-set iteration: start from the chord
// (feasible) and step toward the working-set minimizer until the KKT
// point is reached.
void active_set_project(std::vector<double>& seg, Workspace& ws) {
  const int n = static_cast<int>(seg.size());
  if (n <= 2) return;

  bool feasible = true;
  for (int k = 1; k <= n - 2; ++k) {
    if (second_diff(seg, k) < 0.0) {
      feasible = false;
      break;
    }
  }
  if (feasible) return;

  auto& x = ws.x;
  x.resize(seg.size());
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    x[static_cast<std::size_t>(i)] = (1.0 - t) * seg.front() + t * seg.back();
  }

  ws.working.clear();
  ws.in_working.assign(seg.size(), 0);
  ws.dir.resize(seg.size());

  const int max_iter = 200 + 30 * n;
  for (int iter = 0; iter < max_iter; ++iter) {
    solve_eqp(seg, ws);

    double step_norm = 0.0, target_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      ws.dir[static_cast<std::size_t>(i)] =
          ws.target[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
      step_norm = std::max(step_norm, std::abs(ws.dir[static_cast<std::size_t>(i)]));
      target_norm = std::max(target_norm, std::abs(ws.target[static_cast<std::size_t>(i)]));
    }

    if (step_norm <= 1e-13 * (1.0 + target_norm)) {
      // At the minimizer over the working subspace; check multipliers.
      int drop = -1;
      double most_negative = -1e-11;
      for (std::size_t r = 0; r < ws.working.size(); ++r) {
        if (ws.lambda[r] < most_negative) {
          most_negative = ws.lambda[r];
          drop = static_cast<int>(r);
        }
      }
      if (drop < 0) break;  // optimal
      ws.in_working[static_cast<std::size_t>(ws.working[static_cast<std::size_t>(drop)])] = 0;
      ws.working.erase(ws.working.begin() + drop);
      continue;
    }

    // Largest step toward the target that keeps every inactive constraint
    // satisfied; the first blocking index wins on ties.
    double alpha = 1.0;
    int blocker = -1;
    for (int k = 1; k <= n - 2; ++k) {
      if (ws.in_working[static_cast<std::size_t>(k)]) continue;
      const double along = second_diff(ws.dir, k);
      if (along >= -1e-14) continue;
      const double slack = std::max(second_diff(x, k), 0.0);
      const double bound = slack / (-along);
      if (bound < alpha) {
        alpha = bound;
        blocker = k;
      }
    }

    if (blocker >= 0) {
      for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] += alpha * ws.dir[static_cast<std::size_t>(i)];
      }
      ws.working.insert(std::upper_bound(ws.working.begin(), ws.working.end(), blocker), blocker);
      ws.in_working[static_cast<std::size_t>(blocker)] = 1;
    } else {
      x = ws.target;  // full step
    }
  }

  // Verify the KKT system before accepting the point.
  double worst_primal = 0.0, worst_dual = 0.0, worst_slack = 0.0;
  for (int k = 1; k <= n - 2; ++k) worst_primal = std::min(worst_primal, second_diff(x, k));
  for (double l : ws.lambda) worst_dual = std::min(worst_dual, l);
  for (int k : ws.working) worst_slack = std::max(worst_slack, std::abs(second_diff(x, k)));
  if (worst_primal < -1e-9 || worst_dual < -1e-9 || worst_slack > 1e-9) {
    throw std::logic_error("project_convex: KKT verification failed (primal " +
                           std::to_string(worst_primal) + ", dual " + std::to_string(worst_dual) +
                           ", slack " + std::to_string(worst_slack) + ")");
  }
  seg = x;
}

void check_cone(const ConeSpec& cone, int ambient_len) {
  if (cone.lo < 0 || cone.hi < cone.lo || cone.hi >= ambient_len) {
    throw std::invalid_argument("ConeSpec [" + std::to_string(cone.lo) + ", " +
                                std::to_string(cone.hi) + "] outside grid of length " +
                                std::to_string(ambient_len));
  }
}

// Per-thread scratch: the segment copy, the active-set buffers, and the
// Dykstra state. Reused across calls; none of this survives a thread.
struct Scratch {
  std::vector<double> seg;
  Workspace ws;
  std::vector<std::vector<double>> increments;
  std::vector<double> previous, v;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

bool feasible_for_all(const std::vector<double>& g, std::span<const ConeSpec> cones, double tol) {
  for (const auto& cone : cones) {
    for (int k = cone.lo + 1; k <= cone.hi - 1; ++k) {
      if (second_diff(g, k) < -tol) return false;
    }
  }
  return true;
}

}  // namespace

void project_convex_inplace(std::vector<double>& y, const ConeSpec& cone) {
  check_cone(cone, static_cast<int>(y.size()));
  if (cone.vacuous()) return;
  Scratch& s = scratch();
  s.seg.assign(y.begin() + cone.lo, y.begin() + cone.hi + 1);
  active_set_project(s.seg, s.ws);
  std::copy(s.seg.begin(), s.seg.end(), y.begin() + cone.lo);
}

std::vector<double> project_convex(std::vector<double> y, const ConeSpec& cone) {
  project_convex_inplace(y, cone);
  return y;
}

void dykstra_project_inplace(std::vector<double>& g, std::span<const ConeSpec> cones,
                             const DykstraOptions& opts) {
  const int len = static_cast<int>(g.size());
  for (const auto& cone : cones) check_cone(cone, len);
  if (!(opts.tol > 0.0)) throw std::invalid_argument("dykstra_project: tol must be positive");

  Scratch& s = scratch();
  std::size_t n_active = 0;
  const ConeSpec* only = nullptr;
  for (const auto& cone : cones) {
    if (cone.vacuous()) continue;
    if (n_active == s.increments.size()) s.increments.emplace_back();
    s.increments[n_active].assign(static_cast<std::size_t>(cone.hi - cone.lo + 1), 0.0);
    only = &cone;
    ++n_active;
  }
  if (n_active == 0) return;
  if (n_active == 1) {
    project_convex_inplace(g, *only);
    return;
  }

  s.previous = g;
  double change = 0.0;
  for (int cycle = 1; cycle <= opts.max_cycles; ++cycle) {
    std::size_t j = 0;
    for (const auto& cone : cones) {
      if (cone.vacuous()) continue;
      auto& u = s.increments[j++];
      const std::size_t seg_len = u.size();
      s.v.resize(seg_len);
      for (std::size_t i = 0; i < seg_len; ++i) {
        s.v[i] = g[static_cast<std::size_t>(cone.lo) + i] - u[i];
      }
      active_set_project(s.v, s.ws);
      for (std::size_t i = 0; i < seg_len; ++i) {
        // new increment = projection minus its input, g - u at this point
        u[i] = s.v[i] - g[static_cast<std::size_t>(cone.lo) + i] + u[i];
        g[static_cast<std::size_t>(cone.lo) + i] = s.v[i];
      }
    }
    change = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      change = std::max(change, std::abs(g[i] - s.previous[i]));
    }
    s.previous = g;
    if (change < opts.tol && feasible_for_all(g, cones, opts.feasibility_tol)) return;
  }
  throw NonConvergence(opts.max_cycles, change);
}

std::vector<double> dykstra_project(std::vector<double> y, std::span<const ConeSpec> cones,
                                    const DykstraOptions& opts) {
  dykstra_project_inplace(y, cones, opts);
  return y;
}

}  // namespace convexlse
