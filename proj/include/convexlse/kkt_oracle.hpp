#pragma once

#include <span>
#include <vector>

#include "convexlse/projection.hpp"

namespace convexlse {

// Brute-force reference for projections onto intersections of convexity
// cones: enumerate every subset of the pooled constraint rows, solve the
// equality-constrained least-squares system, and return the candidate
// that is primal feasible with nonnegative multipliers. Exponential in
// the constraint count, hence the ambient cap of 12 points. Kept fully
// independent of the active-set path so the two can check each other.
std::vector<double> kkt_oracle(std::span<const double> y, std::span<const ConeSpec> cones);

}  // namespace convexlse
