#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace seminfo {

// SplitMix64 in counter form: the k-th output is mix64(seed + (k+1)*GOLDEN).
// Every simulation in this library draws from this generator so that a (seed,
// draw index) pair pins each variate across platforms and runs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Independent substream for a shard/size index under the same master seed.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix64(seed + kGolden * (index + 1)));
  }

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

 private:
  std::uint64_t state_;
};

// Symmetric Dirichlet(1) draw, i.e. uniform on the simplex. Entries are
// floored at a tiny positive value so downstream log terms stay finite.
inline std::vector<double> dirichlet_uniform(SplitMix64& rng, std::size_t n) {
  std::vector<double> e(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_double();
    double x = -std::log(1.0 - u);
    if (x < 1e-12) x = 1e-12;
    e[i] = x;
    total += x;
  }
  for (double& x : e) x /= total;
  return e;
}

// Inverse-CDF draw against an inclusive prefix-sum table.
inline std::size_t sample_index(const std::vector<double>& cumulative, double u) {
  std::size_t lo = 0;
  std::size_t hi = cumulative.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (u < cumulative[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo < cumulative.size() ? lo : cumulative.size() - 1;
}

}  // namespace seminfo
