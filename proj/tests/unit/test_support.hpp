#pragma once

#include <cmath>
#include <vector>

#include "seminfo/distribution.hpp"
#include "seminfo/rng.hpp"
#include "seminfo/synonymous.hpp"

namespace testsup {

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline seminfo::Channel make_bsc(double eps) {
  return seminfo::Channel::binary_symmetric(eps);
}

// Random pmf with a controllable support: entries below the cut are zeroed
// before renormalizing, so property tests exercise boundary masses too.
inline seminfo::Distribution random_pmf(seminfo::SplitMix64& rng, std::size_t n,
                                        double zero_cut = 0.15) {
  std::vector<double> v(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_double();
    if (u >= zero_cut) v[i] = u;
    total += v[i];
  }
  if (total == 0.0) {
    v[0] = 1.0;
    total = 1.0;
  }
  for (double& x : v) x /= total;
  return seminfo::Distribution(v, "random pmf");
}

// Random surjective class labels over 0..m-1 with m <= n.
inline seminfo::SynonymousMapping random_mapping(seminfo::SplitMix64& rng, std::size_t n) {
  const std::size_t m = 1 + static_cast<std::size_t>(rng.next_u64() % n);
  std::vector<std::size_t> labels(n);
  for (std::size_t c = 0; c < m; ++c) labels[c] = c;  // guarantee surjectivity
  for (std::size_t i = m; i < n; ++i) labels[i] = rng.next_u64() % m;
  // Shuffle so the dense prefix is not a structural giveaway.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.next_u64() % i;
    std::swap(labels[i - 1], labels[j]);
  }
  return seminfo::SynonymousMapping(labels, "random mapping");
}

inline seminfo::Channel random_channel(seminfo::SplitMix64& rng, std::size_t n_in,
                                       std::size_t n_out) {
  std::vector<std::vector<double>> rows;
  rows.reserve(n_in);
  for (std::size_t x = 0; x < n_in; ++x)
    rows.push_back(random_pmf(rng, n_out, 0.1).probs());
  return seminfo::Channel(rows);
}

}  // namespace testsup
