#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace convexlse {

// Convexity cone on the integer interval [lo, hi] inside an ambient grid
// {0..L}: second differences are constrained at the interior points
// lo+1..hi-1 only; the endpoints are free. Intervals with hi - lo <= 1
// carry no constraint at all.
struct ConeSpec {
  int lo = 0;
  int hi = 0;

  bool vacuous() const { return hi - lo <= 1; }
};

struct DykstraOptions {
  double tol = 1e-10;            // sup-norm change over one full cycle
  double feasibility_tol = 1e-9; // constraint slack accepted at the fixed point
  int max_cycles = 100000;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int cycles, double last_change);
  int cycles() const { return cycles_; }
  double last_change() const { return last_change_; }

 private:
  int cycles_;
  double last_change_;
};

// Euclidean projection of y onto {g : g(k+1) - 2 g(k) + g(k-1) >= 0 for
// lo < k < hi}. Coordinates outside [lo, hi] pass through unchanged; a
// vacuous cone is the identity. Primal active-set solve, KKT-verified.
// The in-place variants reuse thread-local scratch and do not allocate
// once warm, which is what keeps the replication loops scalable.
std::vector<double> project_convex(std::vector<double> y, const ConeSpec& cone);
void project_convex_inplace(std::vector<double>& y, const ConeSpec& cone);

// Projection onto the intersection of the cones via Dykstra's cyclic
// scheme with correction increments. Converged when a full cycle moves
// the iterate by less than opts.tol in sup norm and every constraint
// holds within opts.feasibility_tol; throws NonConvergence at the cycle
// cap otherwise.
std::vector<double> dykstra_project(std::vector<double> y, std::span<const ConeSpec> cones,
                                    const DykstraOptions& opts = {});
void dykstra_project_inplace(std::vector<double>& y, std::span<const ConeSpec> cones,
                             const DykstraOptions& opts = {});

}  // namespace convexlse
