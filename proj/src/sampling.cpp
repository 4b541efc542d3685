#include "convexlse/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace convexlse {

Sample draw_sample(const Pmf& p, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("draw_sample: need n >= 1");
  auto f = cdf(p);
  f.pop_back();  // keep F(0..S); F(S) == 1 pins every draw inside {0..S}
  std::vector<int> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(f.begin(), f.end(), u);
    values[static_cast<std::size_t>(i)] =
        static_cast<int>(std::min<std::ptrdiff_t>(it - f.begin(), p.support_end()));
  }
  return Sample(std::move(values));
}

}  // namespace convexlse
