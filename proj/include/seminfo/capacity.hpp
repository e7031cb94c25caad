#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/rng.hpp"
#include "seminfo/solver_config.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

enum class CapacityMethod { BlahutArimoto, RepresentativeEnum, MultiStart, GridOracle };

enum class CapacityPath { Auto, Enumerate, Ascent };

struct CapacityResult {
  double value;               // bits
  Distribution argmax_input;  // input law achieving value
  std::size_t iterations;
  bool converged;
  CapacityMethod method;
  // Set when an enumeration request could not be honored (non-product joint
  // mapping, or a representative space too large to sweep) and the general
  // ascent ran instead.
  bool fallback_notice = false;
  // Achieved objective after each iteration of the solve that produced the
  // result. For the alternating solver this is the capacity lower bound and
  // is nondecreasing.
  std::vector<double> trace;
};

// Alternating-maximization channel capacity solver. Each round computes the
// per-input divergence D_x = KL(w(.|x) || q) against the current output law;
// sum_x p(x) D_x is an achievable rate and max_x D_x an upper bound on C, so
// the solve stops once their gap drops below cfg.tol. Reported value is the
// achieved rate, hence always a lower bound within cfg.tol of C.
inline CapacityResult blahut_arimoto_capacity(const Channel& w,
                                              const SolverConfig& cfg = {}) {
  const std::size_t n = w.n_in();
  const std::size_t m = w.n_out();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> q(m, 0.0);
  std::vector<double> d(n, 0.0);
  std::vector<double> log2w(n * m, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (w.at(x, y) > 0.0) log2w[x * m + y] = std::log2(w.at(x, y));

  std::vector<double> trace;
  double value = 0.0;
  bool converged = false;
  std::size_t used = 0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    used = it;
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      if (p[x] == 0.0) continue;
      for (std::size_t y = 0; y < m; ++y) q[y] += p[x] * w.at(x, y);
    }
    double lower = 0.0;
    double upper = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < n; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        const double wv = w.at(x, y);
        if (wv > 0.0) dx += wv * (log2w[x * m + y] - std::log2(std::max(q[y], 1e-300)));
      }
      d[x] = dx;
      lower += p[x] * dx;
      upper = std::max(upper, dx);
    }
    value = lower;
    trace.push_back(lower);
    if (upper - lower < cfg.tol) {
      converged = true;
      break;
    }
    double z = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      p[x] *= std::exp2(d[x] - upper);
      z += p[x];
    }
    for (std::size_t x = 0; x < n; ++x) p[x] /= z;
  }
  return CapacityResult{value,     Distribution(std::move(p), "capacity argmax"),
                        used,      converged,
                        CapacityMethod::BlahutArimoto,
                        false,     std::move(trace)};
}

namespace detail {

// Objective J(p) for the semantic capacity search, with reusable buffers so
// the grid oracle can call it a few hundred thousand times.
class SemanticObjective {
 public:
  SemanticObjective(const Channel& w, const SynonymousMapping& fx,
                    const SynonymousMapping& fy, const JointSynonymousMapping& jm,
                    MiVariant variant)
      : w_(w),
        fx_(fx),
        fy_(fy),
        jm_(jm),
        variant_(variant),
        q_(w.n_out(), 0.0),
        mass_(jm.num_classes(), 0.0),
        a_(fx.num_classes(), 0.0),
        b_(fy.num_classes(), 0.0) {
    if (fx.domain_size() != w.n_in())
      throw ValidationError("semantic capacity: input mapping covers " +
                            std::to_string(fx.domain_size()) + " symbols, channel has " +
                            std::to_string(w.n_in()));
    if (fy.domain_size() != w.n_out())
      throw ValidationError("semantic capacity: output mapping covers " +
                            std::to_string(fy.domain_size()) + " symbols, channel emits " +
                            std::to_string(w.n_out()));
    if (jm.n_x() != w.n_in() || jm.n_y() != w.n_out())
      throw ValidationError("semantic capacity: joint mapping shape mismatch");
  }

  double operator()(const std::vector<double>& p) {
    refresh(p);
    const double hs_joint = entropy_bits(mass_);
    if (variant_ == MiVariant::Up) return entropy_bits(p) + entropy_bits(q_) - hs_joint;
    std::fill(a_.begin(), a_.end(), 0.0);
    for (std::size_t x = 0; x < p.size(); ++x) a_[fx_.class_of(x)] += p[x];
    std::fill(b_.begin(), b_.end(), 0.0);
    for (std::size_t y = 0; y < q_.size(); ++y) b_[fy_.class_of(y)] += q_[y];
    return entropy_bits(a_) + entropy_bits(b_) - hs_joint;
  }

  // dJ/dp up to an additive constant (the simplex ascent is invariant to it).
  void gradient(const std::vector<double>& p, std::vector<double>& g) {
    refresh(p);
    const std::size_t n = w_.n_in();
    const std::size_t m = w_.n_out();
    if (variant_ == MiVariant::Eq5) {
      std::fill(a_.begin(), a_.end(), 0.0);
      for (std::size_t x = 0; x < n; ++x) a_[fx_.class_of(x)] += p[x];
      std::fill(b_.begin(), b_.end(), 0.0);
      for (std::size_t y = 0; y < m; ++y) b_[fy_.class_of(y)] += q_[y];
    }
    g.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      double gx = variant_ == MiVariant::Up
                      ? -std::log2(std::max(p[x], 1e-300))
                      : -std::log2(std::max(a_[fx_.class_of(x)], 1e-300));
      for (std::size_t y = 0; y < m; ++y) {
        const double wv = w_.at(x, y);
        if (wv == 0.0) continue;
        const double marg = variant_ == MiVariant::Up ? q_[y] : b_[fy_.class_of(y)];
        gx -= wv * std::log2(std::max(marg, 1e-300));
        gx += wv * std::log2(std::max(mass_[jm_.class_of(x, y)], 1e-300));
      }
      g[x] = gx;
    }
  }

 private:
  void refresh(const std::vector<double>& p) {
    std::fill(q_.begin(), q_.end(), 0.0);
    std::fill(mass_.begin(), mass_.end(), 0.0);
    for (std::size_t x = 0; x < p.size(); ++x) {
      if (p[x] == 0.0) continue;
      for (std::size_t y = 0; y < q_.size(); ++y) {
        const double cell = p[x] * w_.at(x, y);
        q_[y] += cell;
        mass_[jm_.class_of(x, y)] += cell;
      }
    }
  }

  const Channel& w_;
  const SynonymousMapping& fx_;
  const SynonymousMapping& fy_;
  const JointSynonymousMapping& jm_;
  MiVariant variant_;
  std::vector<double> q_;
  std::vector<double> mass_;
  std::vector<double> a_;
  std::vector<double> b_;
};

struct AscentOutcome {
  std::vector<double> p;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

inline void floor_and_normalize(std::vector<double>& p) {
  double z = 0.0;
  for (double& v : p) {
    if (v < 1e-18) v = 1e-18;
    z += v;
  }
  for (double& v : p) v /= z;
}

// Multiplicative-weights ascent on the input simplex. The step is halved
// whenever a trial point lowers the objective; a step that improves by less
// than the relative tolerance ends the climb.
inline AscentOutcome ascend(SemanticObjective& obj, std::vector<double> p,
                            const SolverConfig& cfg) {
  floor_and_normalize(p);
  AscentOutcome out;
  double value = obj(p);
  double eta = 1.0;
  std::vector<double> g, trial(p.size());
  bool converged = false;
  std::size_t it = 0;
  while (it < cfg.max_iter) {
    ++it;
    obj.gradient(p, g);
    const double shift = *std::max_element(g.begin(), g.end());
    for (std::size_t x = 0; x < p.size(); ++x)
      trial[x] = p[x] * std::exp2(eta * (g[x] - shift));
    floor_and_normalize(trial);
    const double trial_value = obj(trial);
    if (trial_value < value) {
      eta *= 0.5;
      if (eta < 1e-14) {
        converged = true;
        break;
      }
      continue;
    }
    const double gain = trial_value - value;
    p.swap(trial);
    value = trial_value;
    if (gain <= cfg.tol * std::max(1.0, std::fabs(value))) {
      converged = true;
      break;
    }
  }
  out.p = std::move(p);
  out.value = value;
  out.converged = converged;
  out.iterations = it;
  return out;
}

}  // namespace detail

// Objective value J(p) of the semantic capacity problem at a given input law.
inline double semantic_objective(const Channel& w, const Distribution& p,
                                 const SynonymousMapping& fx, const SynonymousMapping& fy,
                                 const JointSynonymousMapping& jm, MiVariant variant) {
  detail::SemanticObjective obj(w, fx, fy, jm, variant);
  if (p.size() != w.n_in())
    throw ValidationError("semantic objective: input law size mismatch");
  std::vector<double> raw = p.probs();
  return obj(raw);
}

namespace detail {

// Representative spaces beyond this are not worth sweeping; the ascent path
// takes over (with a notice on the result).
inline constexpr std::size_t kMaxRepresentativeTuples = 262144;

inline bool representative_count(const SynonymousMapping& fx, std::size_t& count) {
  count = 1;
  for (const auto& cls : fx.members()) {
    if (count > kMaxRepresentativeTuples / cls.size() + 1) return false;
    count *= cls.size();
    if (count > kMaxRepresentativeTuples) return false;
  }
  return true;
}

}  // namespace detail

// Semantic channel capacity: maximize the chosen semantic mutual information
// variant over input laws.
//
// Two engines:
//  - Representative enumeration (variant Eq5 with a product joint mapping
//    only). There the objective is the class-level mutual information, which
//    is convex in the class channel, so some choice of one representative
//    symbol per input class carries an optimal law. Each representative
//    tuple induces a class-level channel whose capacity is solved exactly;
//    the best tuple wins. Ties keep the first tuple in lexicographic order.
//  - Multi-start multiplicative-weights ascent for everything else. Starts:
//    uniform, then the classical capacity argmax (nudged off the boundary),
//    then seeded Dirichlet(1) draws. The classical argmax is also kept as a
//    directly evaluated candidate, which pins C_s >= C - tol for the Up
//    variant by construction. Ties keep the earliest start.
inline CapacityResult semantic_capacity(const Channel& w, const SynonymousMapping& fx,
                                        const SynonymousMapping& fy,
                                        const JointSynonymousMapping& jm, MiVariant variant,
                                        const SolverConfig& cfg = {},
                                        CapacityPath path = CapacityPath::Auto) {
  detail::SemanticObjective obj(w, fx, fy, jm, variant);
  const std::size_t n = w.n_in();

  const bool product_eq5 = variant == MiVariant::Eq5 && jm.is_product();
  std::size_t tuple_count = 0;
  const bool enumerable = product_eq5 && detail::representative_count(fx, tuple_count);
  const bool want_enum =
      path == CapacityPath::Enumerate || (path == CapacityPath::Auto && product_eq5);

  if (want_enum && enumerable) {
    const auto members = fx.members();
    const std::size_t mx = fx.num_classes();
    const std::size_t my = fy.num_classes();
    std::vector<std::size_t> choice(mx, 0);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_reps;
    std::vector<double> best_pi;
    bool all_converged = true;
    std::size_t best_iterations = 0;
    for (std::size_t t = 0; t < tuple_count; ++t) {
      std::vector<std::vector<double>> rows(mx, std::vector<double>(my, 0.0));
      for (std::size_t c = 0; c < mx; ++c) {
        const std::size_t rep = members[c][choice[c]];
        for (std::size_t y = 0; y < w.n_out(); ++y)
          rows[c][fy.class_of(y)] += w.at(rep, y);
      }
      CapacityResult sub = blahut_arimoto_capacity(Channel(std::move(rows)), cfg);
      all_converged = all_converged && sub.converged;
      if (sub.value > best) {
        best = sub.value;
        best_pi = sub.argmax_input.probs();
        best_reps.resize(mx);
        for (std::size_t c = 0; c < mx; ++c) best_reps[c] = members[c][choice[c]];
        best_iterations = sub.iterations;
      }
      // odometer step over representative choices
      for (std::size_t c = mx; c-- > 0;) {
        if (++choice[c] < members[c].size()) break;
        choice[c] = 0;
      }
    }
    std::vector<double> p(n, 0.0);
    for (std::size_t c = 0; c < mx; ++c) p[best_reps[c]] = best_pi[c];
    return CapacityResult{best,
                          Distribution(std::move(p), "semantic capacity argmax"),
                          best_iterations,
                          all_converged,
                          CapacityMethod::RepresentativeEnum,
                          false,
                          {}};
  }

  // General path: multi-start ascent.
  const std::size_t starts = std::max<std::size_t>(1, cfg.starts);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_p;
  bool best_converged = false;
  std::size_t best_iterations = 0;

  auto consider = [&](const std::vector<double>& p, double value, bool converged,
                      std::size_t iterations) {
    if (value > best) {
      best = value;
      best_p = p;
      best_converged = converged;
      best_iterations = iterations;
    }
  };

  CapacityResult classical = blahut_arimoto_capacity(w, cfg);
  {
    std::vector<double> pba = classical.argmax_input.probs();
    consider(pba, obj(pba), true, 0);
  }

  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> start;
    if (s == 0) {
      start.assign(n, 1.0 / static_cast<double>(n));
    } else if (s == 1) {
      start = classical.argmax_input.probs();
    } else {
      SplitMix64 rng = SplitMix64::substream(cfg.seed, s);
      start = dirichlet_uniform(rng, n);
    }
    detail::AscentOutcome run = detail::ascend(obj, std::move(start), cfg);
    consider(run.p, run.value, run.converged, run.iterations);
  }

  return CapacityResult{best,
                        Distribution(std::move(best_p), "semantic capacity argmax"),
                        best_iterations,
                        best_converged,
                        CapacityMethod::MultiStart,
                        want_enum && !enumerable,
                        {}};
}

inline CapacityResult semantic_capacity(const Channel& w, const SynonymousMapping& fx,
                                        const SynonymousMapping& fy, MiVariant variant,
                                        const SolverConfig& cfg = {},
                                        CapacityPath path = CapacityPath::Auto) {
  return semantic_capacity(w, fx, fy, JointSynonymousMapping::product(fx, fy), variant,
                           cfg, path);
}

// Exhaustive simplex sweep, the reference the iterative solvers are checked
// against. Deliberately refuses more than four input symbols; the lattice
// blows up combinatorially beyond that.
inline double grid_oracle_capacity(const Channel& w, const SynonymousMapping& fx,
                                   const SynonymousMapping& fy,
                                   const JointSynonymousMapping& jm, MiVariant variant,
                                   double grid_step) {
  const std::size_t n = w.n_in();
  if (n > 4)
    throw ValidationError("grid oracle: refuses channels with more than 4 inputs, got " +
                          std::to_string(n));
  if (!(grid_step > 0.0 && grid_step <= 1.0))
    throw ValidationError("grid oracle: grid step must lie in (0, 1]");
  detail::SemanticObjective obj(w, fx, fy, jm, variant);
  const std::size_t k = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  std::vector<double> p(n, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  // Walk all compositions of k into n parts.
  std::vector<std::size_t> c(n, 0);
  c[n - 1] = k;
  auto eval = [&]() {
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(k);
    best = std::max(best, obj(p));
  };
  if (n == 1) {
    eval();
    return best;
  }
  // Odometer over the first n-1 coordinates; the last takes the remainder.
  std::vector<std::size_t> head(n - 1, 0);
  while (true) {
    std::size_t sum = 0;
    for (std::size_t v : head) sum += v;
    if (sum <= k) {
      for (std::size_t i = 0; i + 1 < n; ++i) c[i] = head[i];
      c[n - 1] = k - sum;
      eval();
    }
    std::size_t pos = n - 1;
    bool done = true;
    while (pos-- > 0) {
      if (++head[pos] <= k) {
        for (std::size_t i = pos + 1; i + 1 < n; ++i) head[i] = 0;
        done = false;
        break;
      }
    }
    if (done) break;
  }
  return best;
}

struct CapacityComparison {
  CapacityResult classical;
  CapacityResult semantic;
  double gap;  // semantic - classical, bits
};

// Side-by-side classical and semantic capacity. For the Up variant the
// semantic value dominates the classical one by construction; a violation
// beyond 1e-6 means a solver bug, not a modeling outcome.
inline CapacityComparison capacity_comparison_report(
    const Channel& w, const SynonymousMapping& fx, const SynonymousMapping& fy,
    const JointSynonymousMapping& jm, MiVariant variant, const SolverConfig& cfg = {}) {
  CapacityResult classical = blahut_arimoto_capacity(w, cfg);
  CapacityResult semantic = semantic_capacity(w, fx, fy, jm, variant, cfg);
  const double gap = semantic.value - classical.value;
  if (variant == MiVariant::Up && gap < -1e-6)
    throw std::logic_error("semantic capacity fell below classical capacity by " +
                           std::to_string(-gap) + " bits under the Up variant");
  return CapacityComparison{std::move(classical), std::move(semantic), gap};
}

}  // namespace seminfo
