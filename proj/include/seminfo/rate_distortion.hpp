#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/distortion.hpp"
#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/solver_config.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

// One operating point of a rate-distortion trade-off, produced at a fixed
// Lagrange multiplier. rate is in bits per symbol.
struct RDPoint {
  double lambda;
  double rate;
  double distortion;
  bool converged;
  std::size_t iterations;
};

// Multiplier sweep. Geometric spacing needs lambda_min > 0.
struct SweepSpec {
  double lambda_min = 0.01;
  double lambda_max = 64.0;
  std::size_t steps = 64;
  bool geometric = true;

  std::vector<double> lambdas() const {
    if (steps < 2) throw ValidationError("sweep: need at least 2 steps");
    if (!(lambda_min >= 0.0) || !(lambda_max > lambda_min))
      throw ValidationError("sweep: need 0 <= lambda_min < lambda_max");
    if (geometric && lambda_min <= 0.0)
      throw ValidationError("sweep: geometric spacing needs lambda_min > 0");
    std::vector<double> out(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
      out[i] = geometric ? lambda_min * std::pow(lambda_max / lambda_min, t)
                         : lambda_min + t * (lambda_max - lambda_min);
    }
    out.back() = lambda_max;
    return out;
  }
};

struct RDCurve {
  std::vector<RDPoint> points;

  bool all_converged() const {
    for (const auto& pt : points)
      if (!pt.converged) return false;
    return true;
  }
};

// Expected distortion of the best single reconstruction; the distortion at
// which the rate hits zero.
inline double zero_rate_distortion(const Distribution& p, const DistortionMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d.n_rec(); ++j) {
    double e = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) e += p[x] * d.at(x, j);
    best = std::min(best, e);
  }
  return best;
}

// Floor of achievable distortion: each source symbol sent to its cheapest
// reconstruction.
inline double min_achievable_distortion(const Distribution& p, const DistortionMatrix& d) {
  double e = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) e += p[x] * d.row_min(x);
  return e;
}

namespace detail {

inline void check_rd_dims(const Distribution& p, const DistortionMatrix& d) {
  if (p.size() != d.n_src())
    throw ValidationError("rate-distortion: source size " + std::to_string(p.size()) +
                          " does not match distortion rows " + std::to_string(d.n_src()));
}

// All compositions of k into m parts, scaled to probability rows.
inline std::vector<std::vector<double>> lattice_rows(std::size_t k, std::size_t m) {
  std::vector<std::vector<double>> rows;
  std::vector<double> row(m, 0.0);
  std::vector<std::size_t> counts(m, 0);
  auto rec = [&](auto&& self, std::size_t at, std::size_t rem) -> void {
    if (at + 1 == m) {
      counts[at] = rem;
      for (std::size_t j = 0; j < m; ++j)
        row[j] = static_cast<double>(counts[j]) / static_cast<double>(k);
      rows.push_back(row);
      return;
    }
    for (std::size_t c = 0; c <= rem; ++c) {
      counts[at] = c;
      self(self, at + 1, rem - c);
    }
  };
  rec(rec, 0, k);
  return rows;
}

// Sort by distortion and drop points whose distortion repeats within 1e-9;
// the secondary rate ordering keeps the cheaper point of a duplicate pair.
inline RDCurve assemble_curve(std::vector<RDPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const RDPoint& a, const RDPoint& b) {
    if (a.distortion != b.distortion) return a.distortion < b.distortion;
    return a.rate < b.rate;
  });
  RDCurve curve;
  for (auto& pt : pts) {
    if (!curve.points.empty() && pt.distortion - curve.points.back().distortion <= 1e-9)
      continue;
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace detail

// Alternating minimization of I(X;Xhat) + lambda E[d] over test channels.
//
// Per round, the optimal channel for the current reconstruction law q is
// W(j|x) proportional to q(j) 2^(-lambda d(x,j)); the dual certificate
// log2 max_j sum_x p(x) 2^(-lambda d(x,j)) / c(x), with c(x) the row
// normalizer, bounds how far the achieved Lagrangian sits above the optimum,
// so on convergence the reported rate is within cfg.tol of the true curve at
// the reported distortion. Rows are handled in log space, which keeps very
// large multipliers (used to pin the D = 0 endpoint) stable.
//
// lambda = 0 is served directly: the optimum collapses to the single best
// reconstruction, rate 0. The fixed-point iteration is stationary there and
// would report the average over its starting law instead.
inline RDPoint ba_rd_point(const Distribution& p, const DistortionMatrix& d, double lambda,
                           const SolverConfig& cfg = {}) {
  detail::check_rd_dims(p, d);
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ValidationError("rate-distortion: lambda must be finite and nonnegative");
  const std::size_t n = p.size();
  const std::size_t m = d.n_rec();

  if (lambda == 0.0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double e = 0.0;
      for (std::size_t x = 0; x < n; ++x) e += p[x] * d.at(x, j);
      if (e < best) best = e;
    }
    return RDPoint{0.0, 0.0, best, true, 0};
  }

  std::vector<double> q(m, 1.0 / static_cast<double>(m));
  std::vector<double> w(n * m, 0.0);       // test channel rows
  std::vector<double> log2c(n, 0.0);       // row normalizers, log2
  std::vector<double> loga(m, 0.0);
  bool converged = false;
  std::size_t used = 0;

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    used = it;
    // Channel update in log space.
    for (std::size_t x = 0; x < n; ++x) {
      double rowmax = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        const double lq = q[j] > 0.0 ? std::log2(q[j]) : -std::numeric_limits<double>::infinity();
        loga[j] = lq - lambda * d.at(x, j);
        rowmax = std::max(rowmax, loga[j]);
      }
      double rowsum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double v = std::exp2(loga[j] - rowmax);
        w[x * m + j] = v;
        rowsum += v;
      }
      for (std::size_t j = 0; j < m; ++j) w[x * m + j] /= rowsum;
      log2c[x] = rowmax + std::log2(rowsum);
    }
    // Dual certificate.
    double gap = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double emax = -std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < n; ++x)
        emax = std::max(emax, -lambda * d.at(x, j) - log2c[x]);
      double s = 0.0;
      for (std::size_t x = 0; x < n; ++x)
        s += p[x] * std::exp2(-lambda * d.at(x, j) - log2c[x] - emax);
      gap = std::max(gap, emax + std::log2(s));
    }
    if (gap < cfg.tol) {
      converged = true;
      break;
    }
    // Reconstruction-law update.
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t j = 0; j < m; ++j) q[j] += p[x] * w[x * m + j];
  }

  // Achieved pair from the final channel.
  std::vector<double> r(m, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < m; ++j) r[j] += p[x] * w[x * m + j];
  double rate = 0.0;
  double dist = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t j = 0; j < m; ++j) {
      const double wv = w[x * m + j];
      if (wv > 0.0) rate += p[x] * wv * (std::log2(wv) - std::log2(r[j]));
      dist += p[x] * wv * d.at(x, j);
    }
  }
  if (rate < 0.0) rate = 0.0;  // roundoff guard near the zero-rate end
  return RDPoint{lambda, rate, dist, converged, used};
}

// Sweeps the multiplier and assembles the trade-off curve, sorted by
// distortion with near-duplicate points (within 1e-9) collapsed.
inline RDCurve rd_curve(const Distribution& p, const DistortionMatrix& d,
                        const SweepSpec& sweep, const SolverConfig& cfg = {}) {
  detail::check_rd_dims(p, d);
  std::vector<RDPoint> pts;
  for (double lambda : sweep.lambdas()) pts.push_back(ba_rd_point(p, d, lambda, cfg));
  return detail::assemble_curve(std::move(pts));
}

// Meaning-level trade-off: compress the class identity, not the symbol. The
// problem reduces exactly to a classical trade-off for the pushforward
// source under the class-level distortion.
inline RDCurve semantic_rd_curve(const Distribution& p, const SynonymousMapping& f,
                                 const DistortionMatrix& ds, const SweepSpec& sweep,
                                 const SolverConfig& cfg = {}) {
  if (ds.n_src() != f.num_classes() || ds.n_rec() != f.num_classes())
    throw ValidationError("semantic rate-distortion: class distortion is " +
                          std::to_string(ds.n_src()) + "x" + std::to_string(ds.n_rec()) +
                          ", mapping has " + std::to_string(f.num_classes()) + " classes");
  return rd_curve(pushforward(p, f), ds, sweep, cfg);
}

inline RDPoint semantic_rd_point(const Distribution& p, const SynonymousMapping& f,
                                 const DistortionMatrix& ds, double lambda,
                                 const SolverConfig& cfg = {}) {
  if (ds.n_src() != f.num_classes() || ds.n_rec() != f.num_classes())
    throw ValidationError("semantic rate-distortion: class distortion shape mismatch");
  return ba_rd_point(pushforward(p, f), ds, lambda, cfg);
}

// Rate at a requested distortion, found by bisecting the multiplier until
// the achieved distortion lands within 1e-6 of the target. Targets at or
// below the achievable floor are served by a single very large multiplier,
// which pins the D = 0 endpoint (rate = source entropy when every symbol has
// a private zero-distortion reconstruction) to full precision.
inline RDPoint rate_at_distortion(const Distribution& p, const DistortionMatrix& d,
                                  double target, const SolverConfig& cfg = {}) {
  detail::check_rd_dims(p, d);
  if (!std::isfinite(target) || target < 0.0)
    throw ValidationError("rate-distortion: target distortion must be finite and >= 0");
  const double floor_d = min_achievable_distortion(p, d);
  const double ceil_d = zero_rate_distortion(p, d);
  if (target < floor_d - 1e-9)
    throw ValidationError("rate-distortion: target distortion " + std::to_string(target) +
                          " below achievable floor " + std::to_string(floor_d));
  if (target >= ceil_d) return ba_rd_point(p, d, 0.0, cfg);

  const double min_pos = d.min_positive();
  const double lambda_cap = min_pos > 0.0 ? 80.0 / min_pos : 1.0;
  if (target <= floor_d + 1e-9) return ba_rd_point(p, d, lambda_cap, cfg);

  double lo = 0.0;  // distortion(lo) >= target
  double hi = 1.0;
  RDPoint at_hi = ba_rd_point(p, d, hi, cfg);
  while (at_hi.distortion > target && hi < lambda_cap) {
    hi = std::min(hi * 2.0, lambda_cap);
    at_hi = ba_rd_point(p, d, hi, cfg);
  }
  if (std::fabs(at_hi.distortion - target) <= 1e-6) return at_hi;
  RDPoint best = at_hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    RDPoint at_mid = ba_rd_point(p, d, mid, cfg);
    if (std::fabs(at_mid.distortion - target) <= 1e-6) return at_mid;
    if (at_mid.distortion > target) {
      lo = mid;
    } else {
      hi = mid;
      best = at_mid;
    }
  }
  return best;  // closest point from above the target's rate
}

// Exhaustive reference: minimize mutual information over a lattice of test
// channels subject to the distortion budget. Only for tiny instances; the
// iterative solver is validated against it.
inline double brute_force_rd(const Distribution& p, const DistortionMatrix& d,
                             double target, double grid_step) {
  detail::check_rd_dims(p, d);
  const std::size_t n = p.size();
  const std::size_t m = d.n_rec();
  if (n * m > 9)
    throw ValidationError("brute force rate-distortion: refuses instances larger than 9 "
                          "cells, got " +
                          std::to_string(n * m));
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw ValidationError("brute force rate-distortion: grid step must lie in (0, 1]");
  if (target < min_achievable_distortion(p, d) - 1e-12)
    throw ValidationError("brute force rate-distortion: infeasible distortion target");
  const std::size_t k = static_cast<std::size_t>(std::llround(1.0 / grid_step));

  // All lattice rows, with per-row entropy and per-source expected
  // distortion precomputed.
  const std::vector<std::vector<double>> rows = detail::lattice_rows(k, m);

  const std::size_t nrows = rows.size();
  std::vector<double> row_entropy(nrows, 0.0);
  std::vector<double> row_dist(nrows * n, 0.0);
  for (std::size_t r = 0; r < nrows; ++r) {
    double h = 0.0;
    for (double v : rows[r])
      if (v > 0.0) h -= v * std::log2(v);
    row_entropy[r] = h;
    for (std::size_t x = 0; x < n; ++x) {
      double e = 0.0;
      for (std::size_t j = 0; j < m; ++j) e += rows[r][j] * d.at(x, j);
      row_dist[r * n + x] = e;
    }
  }
  // Cheapest remaining distortion from each source symbol onward, for pruning.
  std::vector<double> tail_min(n + 1, 0.0);
  for (std::size_t x = n; x-- > 0;) {
    double mn = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < nrows; ++r) mn = std::min(mn, row_dist[r * n + x]);
    tail_min[x] = tail_min[x + 1] + p[x] * mn;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n, 0);
  const double budget = target + 1e-12;

  auto rec = [&](auto&& self, std::size_t x, double dist_so_far, double cond_h) -> void {
    if (dist_so_far + tail_min[x] > budget) return;
    if (x == n) {
      double h = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        double qj = 0.0;
        for (std::size_t xx = 0; xx < n; ++xx) qj += p[xx] * rows[pick[xx]][j];
        if (qj > 0.0) h -= qj * std::log2(qj);
      }
      best = std::min(best, h - cond_h);
      return;
    }
    for (std::size_t r = 0; r < nrows; ++r) {
      pick[x] = r;
      self(self, x + 1, dist_so_far + p[x] * row_dist[r * n + x],
           cond_h + p[x] * row_entropy[r]);
    }
  };
  rec(rec, 0, 0.0, 0.0);
  if (!std::isfinite(best))
    throw ValidationError("brute force rate-distortion: no lattice point meets the target");
  return best < 0.0 ? 0.0 : best;
}

}  // namespace seminfo
