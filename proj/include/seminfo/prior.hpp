#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/distortion.hpp"
#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/rate_distortion.hpp"
#include "seminfo/rng.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

// Shared knowledge model: both ends know the prior state K before
// transmission; the source law conditions on it, and the semantic mapping
// says which symbol distinctions carry meaning.
class SideInfoModel {
 public:
  SideInfoModel(Distribution pk, std::vector<Distribution> px_given_k,
                SynonymousMapping semantic_map)
      : pk_(std::move(pk)),
        px_given_k_(std::move(px_given_k)),
        semantic_map_(std::move(semantic_map)) {
    if (px_given_k_.size() != pk_.size())
      throw ValidationError("side info: " + std::to_string(pk_.size()) +
                            " prior states but " + std::to_string(px_given_k_.size()) +
                            " conditional rows");
    const std::size_t nx = px_given_k_[0].size();
    for (std::size_t k = 0; k < px_given_k_.size(); ++k)
      if (px_given_k_[k].size() != nx)
        throw ValidationError("side info: conditional row " + std::to_string(k) +
                              " has size " + std::to_string(px_given_k_[k].size()) +
                              ", expected " + std::to_string(nx));
    if (semantic_map_.domain_size() != nx)
      throw ValidationError("side info: semantic map covers " +
                            std::to_string(semantic_map_.domain_size()) +
                            " symbols, source has " + std::to_string(nx));
  }

  std::size_t n_k() const { return pk_.size(); }
  std::size_t n_x() const { return px_given_k_[0].size(); }
  const Distribution& pk() const { return pk_; }
  const Distribution& px_given(std::size_t k) const { return px_given_k_[k]; }
  const SynonymousMapping& semantic_map() const { return semantic_map_; }

  Distribution marginal_x() const {
    std::vector<double> m(n_x(), 0.0);
    for (std::size_t k = 0; k < n_k(); ++k)
      for (std::size_t x = 0; x < n_x(); ++x) m[x] += pk_[k] * px_given_k_[k][x];
    return Distribution(std::move(m), "side info marginal");
  }

 private:
  Distribution pk_;
  std::vector<Distribution> px_given_k_;
  SynonymousMapping semantic_map_;
};

// H(X|K) = sum_k p(k) H(X|K=k), bits.
inline double conditional_entropy_given_prior(const SideInfoModel& m) {
  double h = 0.0;
  for (std::size_t k = 0; k < m.n_k(); ++k)
    if (m.pk()[k] > 0.0) h += m.pk()[k] * entropy(m.px_given(k));
  return h;
}

// How much the shared prior shrinks the source uncertainty:
// H(X) - H(X|K) = I(X;K) >= 0.
inline double prior_gain(const SideInfoModel& m) {
  return entropy(m.marginal_x()) - conditional_entropy_given_prior(m);
}

// One operating point of the prior-conditioned semantic trade-off. The
// Lagrangian splits across prior states, so one shared multiplier solves a
// per-state class-level problem and the state laws mix the results.
inline RDPoint conditional_rd_point(const SideInfoModel& m, const DistortionMatrix& ds,
                                    double lambda, const SolverConfig& cfg = {}) {
  const std::size_t classes = m.semantic_map().num_classes();
  if (ds.n_src() != classes || ds.n_rec() != classes)
    throw ValidationError("conditional rate-distortion: class distortion is " +
                          std::to_string(ds.n_src()) + "x" + std::to_string(ds.n_rec()) +
                          ", semantic map has " + std::to_string(classes) + " classes");
  double rate = 0.0;
  double dist = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  for (std::size_t k = 0; k < m.n_k(); ++k) {
    const double w = m.pk()[k];
    if (w == 0.0) continue;
    RDPoint pt = ba_rd_point(pushforward(m.px_given(k), m.semantic_map()), ds, lambda, cfg);
    rate += w * pt.rate;
    dist += w * pt.distortion;
    converged = converged && pt.converged;
    iterations = std::max(iterations, pt.iterations);
  }
  return RDPoint{lambda, rate, dist, converged, iterations};
}

inline RDCurve conditional_rd_curve(const SideInfoModel& m, const DistortionMatrix& ds,
                                    const SweepSpec& sweep, const SolverConfig& cfg = {}) {
  std::vector<RDPoint> pts;
  for (double lambda : sweep.lambdas()) pts.push_back(conditional_rd_point(m, ds, lambda, cfg));
  return detail::assemble_curve(std::move(pts));
}

// Exhaustive reference for the conditional trade-off on tiny two-state
// models: sweep a lattice of per-state symbol-level test channels under the
// lifted class distortion and a shared average-distortion budget. States
// with zero prior mass are dropped; at most two live states are supported.
inline double brute_force_conditional_rd(const SideInfoModel& m, const DistortionMatrix& ds,
                                         double target, double grid_step) {
  const std::size_t classes = m.semantic_map().num_classes();
  if (ds.n_src() != classes || ds.n_rec() != classes)
    throw ValidationError("conditional brute force: class distortion shape mismatch");
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw ValidationError("conditional brute force: grid step must lie in (0, 1]");
  const std::size_t nx = m.n_x();
  if (nx * nx > 9)
    throw ValidationError("conditional brute force: refuses sources beyond 3 symbols");

  std::vector<std::size_t> live;
  for (std::size_t k = 0; k < m.n_k(); ++k)
    if (m.pk()[k] > 0.0) live.push_back(k);
  if (live.size() > 2)
    throw ValidationError("conditional brute force: supports at most two live states");

  // Lifted distortion between symbols through their classes.
  const auto& f = m.semantic_map();
  std::vector<double> dlift(nx * nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t j = 0; j < nx; ++j)
      dlift[x * nx + j] = ds.at(f.class_of(x), f.class_of(j));

  const std::size_t k_per_row = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  const std::vector<std::vector<double>> rows = detail::lattice_rows(k_per_row, nx);
  const std::size_t nrows = rows.size();
  double kernels = 1.0;
  for (std::size_t x = 0; x < nx; ++x) kernels *= static_cast<double>(nrows);
  if (kernels > 2e6)
    throw ValidationError("conditional brute force: lattice too large, coarsen the grid");

  std::vector<double> row_entropy(nrows);
  for (std::size_t r = 0; r < nrows; ++r) {
    double h = 0.0;
    for (double v : rows[r])
      if (v > 0.0) h -= v * std::log2(v);
    row_entropy[r] = h;
  }

  // Every kernel's (expected distortion, mutual information) for one state.
  auto state_points = [&](const Distribution& px) {
    std::vector<std::pair<double, double>> pts;  // (E, I)
    pts.reserve(static_cast<std::size_t>(kernels));
    std::vector<std::size_t> pick(nx, 0);
    auto rec = [&](auto&& self, std::size_t x, double dist, double cond_h) -> void {
      if (x == nx) {
        double h = 0.0;
        for (std::size_t j = 0; j < nx; ++j) {
          double qj = 0.0;
          for (std::size_t xx = 0; xx < nx; ++xx) qj += px[xx] * rows[pick[xx]][j];
          if (qj > 0.0) h -= qj * std::log2(qj);
        }
        pts.emplace_back(dist, h - cond_h);
        return;
      }
      for (std::size_t r = 0; r < nrows; ++r) {
        double e = 0.0;
        for (std::size_t j = 0; j < nx; ++j) e += rows[r][j] * dlift[x * nx + j];
        pick[x] = r;
        self(self, x + 1, dist + px[x] * e, cond_h + px[x] * row_entropy[r]);
      }
    };
    rec(rec, 0, 0.0, 0.0);
    return pts;
  };

  const double budget = target + 1e-12;

  if (live.size() == 1) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [e, i] : state_points(m.px_given(live[0])))
      if (e <= budget) best = std::min(best, i);
    if (!std::isfinite(best))
      throw ValidationError("conditional brute force: no lattice point meets the target");
    return best < 0.0 ? 0.0 : best;
  }

  const double w0 = m.pk()[live[0]];
  const double w1 = m.pk()[live[1]];
  auto pts0 = state_points(m.px_given(live[0]));
  auto pts1 = state_points(m.px_given(live[1]));

  // Sort the second state by distortion and keep the running rate minimum, so
  // each first-state kernel pairs with its best affordable partner.
  std::sort(pts1.begin(), pts1.end());
  std::vector<double> prefix_min(pts1.size());
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts1.size(); ++i) {
    run = std::min(run, pts1[i].second);
    prefix_min[i] = run;
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& [e0, i0] : pts0) {
    const double remaining = (budget - w0 * e0) / w1;
    if (remaining < 0.0) continue;
    // last index with distortion <= remaining
    std::size_t lo = 0, hi = pts1.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (pts1[mid].first <= remaining)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) continue;
    best = std::min(best, w0 * i0 + w1 * prefix_min[lo - 1]);
  }
  if (!std::isfinite(best))
    throw ValidationError("conditional brute force: no lattice point meets the target");
  return best < 0.0 ? 0.0 : best;
}

// Raw (k, x) observations plus the alphabet sizes they are drawn from.
struct SampleSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t n_k;
  std::size_t n_x;
};

// Plug-in H(X|K) estimate: empirical state weights, additively smoothed
// conditionals. Smoothing > 0 biases the estimate upward, which is the safe
// direction for a rate planner.
inline double estimate_conditional_entropy(const SampleSet& s, double smoothing = 1.0) {
  if (s.pairs.empty()) throw ValidationError("estimator: no samples");
  if (s.n_k == 0 || s.n_x == 0) throw ValidationError("estimator: empty alphabets");
  if (!(smoothing >= 0.0) || !std::isfinite(smoothing))
    throw ValidationError("estimator: smoothing must be finite and >= 0");
  std::vector<double> joint(s.n_k * s.n_x, 0.0);
  std::vector<double> per_k(s.n_k, 0.0);
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const auto [k, x] = s.pairs[i];
    if (k >= s.n_k || x >= s.n_x)
      throw ValidationError("estimator: sample " + std::to_string(i) + " = (" +
                            std::to_string(k) + "," + std::to_string(x) +
                            ") outside declared alphabets");
    joint[k * s.n_x + x] += 1.0;
    per_k[k] += 1.0;
  }
  const double total = static_cast<double>(s.pairs.size());
  double h = 0.0;
  for (std::size_t k = 0; k < s.n_k; ++k) {
    if (per_k[k] == 0.0) continue;
    const double denom = per_k[k] + smoothing * static_cast<double>(s.n_x);
    double hk = 0.0;
    for (std::size_t x = 0; x < s.n_x; ++x) {
      const double pxk = (joint[k * s.n_x + x] + smoothing) / denom;
      if (pxk > 0.0) hk -= pxk * std::log2(pxk);
    }
    h += (per_k[k] / total) * hk;
  }
  return h;
}

inline SampleSet draw_samples(const SideInfoModel& m, std::size_t n, SplitMix64& rng) {
  const auto cum_k = m.pk().cumulative();
  std::vector<std::vector<double>> cum_x(m.n_k());
  for (std::size_t k = 0; k < m.n_k(); ++k) cum_x[k] = m.px_given(k).cumulative();
  SampleSet s;
  s.n_k = m.n_k();
  s.n_x = m.n_x();
  s.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = sample_index(cum_k, rng.next_double());
    const std::size_t x = sample_index(cum_x[k], rng.next_double());
    s.pairs.emplace_back(k, x);
  }
  return s;
}

struct ScalingPoint {
  std::size_t sample_size;
  double estimate;
};

struct ScalingTrendReport {
  std::vector<ScalingPoint> series;
  double true_value;
  std::uint64_t seed;
  double smoothing;
};

// Estimator consistency sweep: one independent substream per sample size, so
// growing the size list never perturbs earlier entries. With smoothing > 0
// the series tends to approach the true H(X|K) from above.
inline ScalingTrendReport scaling_trend_report(const SideInfoModel& m,
                                               const std::vector<std::size_t>& sizes,
                                               std::uint64_t seed, double smoothing = 1.0) {
  if (sizes.empty()) throw ValidationError("scaling trend: no sample sizes");
  ScalingTrendReport report;
  report.true_value = conditional_entropy_given_prior(m);
  report.seed = seed;
  report.smoothing = smoothing;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw ValidationError("scaling trend: sample size 0");
    SplitMix64 rng = SplitMix64::substream(seed, i);
    const SampleSet s = draw_samples(m, sizes[i], rng);
    report.series.push_back({sizes[i], estimate_conditional_entropy(s, smoothing)});
  }
  return report;
}

}  // namespace seminfo
