#pragma once

#include "convexlse/estimator.hpp"
#include "convexlse/pmf.hpp"
#include "convexlse/rng.hpp"

namespace convexlse {

// n i.i.d. draws from p by inversion of the cdf; every draw lands in
// {0..S}.
Sample draw_sample(const Pmf& p, int n, Rng& rng);

}  // namespace convexlse
