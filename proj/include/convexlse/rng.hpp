#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace convexlse {

// One splitmix64 step; used only to derive well-separated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Well-separated engine seed for item `index` of substream `stream_id`
// under one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id,
                                 std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (stream_id + 0x9e3779b97f4a7c15ull);
  mixed = splitmix64(s);
  s = mixed ^ (index + 0xbf58476d1ce4e5b9ull);
  return splitmix64(s);
}

// Deterministic random source. The raw stream comes from std::mt19937_64
// (whose output sequence is fixed by the standard); the uniform and normal
// mappings are spelled out here instead of using std::*_distribution, whose
// algorithms are implementation-defined. Replications get their own engine
// via Rng::stream so results do not depend on scheduling or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent generator for replication `index` of substream `stream`
  // under a single master seed.
  static Rng stream(std::uint64_t master, std::uint64_t stream_id, std::uint64_t index) {
    return Rng(derive_seed(master, stream_id, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via the Marsaglia polar method (no libm trig).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace convexlse
