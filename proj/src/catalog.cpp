#include "convexlse/catalog.hpp"

#include <stdexcept>
#include <string>

namespace convexlse {

MixtureWeights catalog_weights(std::string_view id) {
  //            pi_1  pi_2    pi_3    pi_4    pi_5    pi_6    pi_7    pi_8    pi_9    pi_10   pi_11
  if (id == "p1") {
    return MixtureWeights({0, 1.0 / 6, 0, 0, 1.0 / 6, 0, 0, 0, 1.0 / 2, 0, 1.0 / 6});
  }
  if (id == "p2") {
    return MixtureWeights({0, 0, 0, 1.0 / 6, 0, 1.0 / 6, 0, 1.0 / 12, 0, 1.0 / 2, 1.0 / 12});
  }
  if (id == "p3") {
    return MixtureWeights({0, 0, 2.0 / 13, 1.0 / 13, 3.0 / 13, 0, 1.0 / 13, 0, 2.0 / 13,
                           2.0 / 13, 2.0 / 13});
  }
  if (id == "p4") {
    return MixtureWeights({0, 1.0 / 12, 1.0 / 6, 1.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12,
                           1.0 / 12, 1.0 / 12, 1.0 / 6, 1.0 / 12});
  }
  throw std::invalid_argument("catalog_weights: no mixture weights for '" + std::string(id) + "'");
}

Pmf catalog(std::string_view id) {
  if (id == "p0") return triangular(11);
  if (id == "p5") return truncated_geometric(0.5, 10);
  if (id == "p1" || id == "p2" || id == "p3" || id == "p4") {
    return mixture_compose(catalog_weights(id));
  }
  throw std::invalid_argument("catalog: unknown pmf id '" + std::string(id) +
                              "' (expected p0..p5)");
}

}  // namespace convexlse
