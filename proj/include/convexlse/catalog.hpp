#pragma once

#include <string_view>

#include "convexlse/pmf.hpp"

namespace convexlse {

// Built-in test distributions p0..p5, all supported on {0..10}:
//   p0       triangular,
//   p1..p4   triangular mixtures with 3, 4, 6 and 9 interior knots,
//   p5       truncated geometric with q = 1/2.
Pmf catalog(std::string_view id);

// Mixing weights behind p1..p4.
MixtureWeights catalog_weights(std::string_view id);

}  // namespace convexlse
