#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/errors.hpp"

namespace seminfo {

// Hard cap on alphabet sizes. Everything here is dense; the toolkit targets
// desk-scale models, not corpus-scale ones.
inline constexpr std::size_t kMaxAlphabet = 4096;

// Probability vectors must sum to 1 within this slack. Entries in
// [-kNegativeClamp, 0) are treated as roundoff and clamped to zero; anything
// more negative is rejected. Nothing is ever silently renormalized.
inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kNegativeClamp = 1e-12;

namespace detail {

inline void validate_pmf(std::vector<double>& p, const std::string& what) {
  if (p.empty()) throw ValidationError(what + ": empty probability vector");
  if (p.size() > kMaxAlphabet)
    throw ValidationError(what + ": alphabet size " + std::to_string(p.size()) +
                          " exceeds limit " + std::to_string(kMaxAlphabet));
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double v = p[i];
    if (!std::isfinite(v))
      throw ValidationError(what + "[" + std::to_string(i) + "]: non-finite entry");
    if (v < 0.0) {
      if (v < -kNegativeClamp)
        throw ValidationError(what + "[" + std::to_string(i) + "]: negative entry " +
                              std::to_string(v));
      p[i] = 0.0;
      v = 0.0;
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance)
    throw ValidationError(what + ": probabilities sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
}

}  // namespace detail

// Finite probability mass function over symbols 0..size()-1.
class Distribution {
 public:
  explicit Distribution(std::vector<double> p, const std::string& what = "distribution")
      : p_(std::move(p)) {
    detail::validate_pmf(p_, what);
  }

  static Distribution uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

  std::vector<double> cumulative() const {
    std::vector<double> c(p_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      run += p_[i];
      c[i] = run;
    }
    return c;
  }

 private:
  std::vector<double> p_;
};

// Row-stochastic transition matrix: row x is the output law given input x.
class Channel {
 public:
  explicit Channel(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw ValidationError("channel: no rows");
    if (rows.size() > kMaxAlphabet)
      throw ValidationError("channel: input alphabet exceeds limit");
    const std::size_t width = rows[0].size();
    rows_.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != width)
        throw ValidationError("channel: row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(width));
      rows_.emplace_back(std::move(rows[i]), "channel row " + std::to_string(i));
    }
  }

  std::size_t n_in() const { return rows_.size(); }
  std::size_t n_out() const { return rows_[0].size(); }
  double at(std::size_t x, std::size_t y) const { return rows_[x][y]; }
  const Distribution& row(std::size_t x) const { return rows_[x]; }

  static Channel identity(std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return Channel(std::move(rows));
  }

  static Channel binary_symmetric(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 1.0))
      throw ValidationError("channel: crossover must lie in [0,1]");
    return Channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
  }

 private:
  std::vector<Distribution> rows_;
};

// Joint law over a pair of finite alphabets, cells row-major by x.
class JointDistribution {
 public:
  JointDistribution(std::vector<double> cells, std::size_t n_x, std::size_t n_y)
      : cells_(std::move(cells)), n_x_(n_x), n_y_(n_y) {
    if (n_x_ == 0 || n_y_ == 0) throw ValidationError("joint: empty axis");
    if (n_x_ > kMaxAlphabet || n_y_ > kMaxAlphabet)
      throw ValidationError("joint: alphabet size exceeds limit");
    if (cells_.size() != n_x_ * n_y_)
      throw ValidationError("joint: cell count " + std::to_string(cells_.size()) +
                            " does not match " + std::to_string(n_x_) + "x" +
                            std::to_string(n_y_));
    double sum = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      double v = cells_[i];
      if (!std::isfinite(v)) throw ValidationError("joint: non-finite cell");
      if (v < 0.0) {
        if (v < -kNegativeClamp)
          throw ValidationError("joint: negative cell " + std::to_string(v));
        cells_[i] = 0.0;
        v = 0.0;
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kSumTolerance)
      throw ValidationError("joint: cells sum to " + std::to_string(sum));
  }

  static JointDistribution from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("joint: no rows");
    std::size_t width = rows[0].size();
    std::vector<double> cells;
    cells.reserve(rows.size() * width);
    for (const auto& r : rows) {
      if (r.size() != width) throw ValidationError("joint: ragged rows");
      cells.insert(cells.end(), r.begin(), r.end());
    }
    return JointDistribution(std::move(cells), rows.size(), width);
  }

  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  double at(std::size_t x, std::size_t y) const { return cells_[x * n_y_ + y]; }
  const std::vector<double>& cells() const { return cells_; }

  Distribution marginal_x() const {
    std::vector<double> m(n_x_, 0.0);
    for (std::size_t x = 0; x < n_x_; ++x)
      for (std::size_t y = 0; y < n_y_; ++y) m[x] += at(x, y);
    return Distribution(std::move(m), "marginal_x");
  }

  Distribution marginal_y() const {
    std::vector<double> m(n_y_, 0.0);
    for (std::size_t x = 0; x < n_x_; ++x)
      for (std::size_t y = 0; y < n_y_; ++y) m[y] += at(x, y);
    return Distribution(std::move(m), "marginal_y");
  }

 private:
  std::vector<double> cells_;
  std::size_t n_x_;
  std::size_t n_y_;
};

namespace detail {

// Shannon entropy of a raw nonnegative vector, in bits, with 0 log 0 = 0.
// Does not require the vector to be normalized; callers that pass masses of a
// sub-probability vector get the corresponding partial sum.
inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

}  // namespace detail

inline double entropy(const Distribution& p) { return detail::entropy_bits(p.probs()); }

inline double joint_entropy(const JointDistribution& j) {
  return detail::entropy_bits(j.cells());
}

// Couples a source with a channel: cell (x, y) = p(x) * w(y|x).
inline JointDistribution joint_from(const Distribution& p, const Channel& w) {
  if (p.size() != w.n_in())
    throw ValidationError("joint_from: source size " + std::to_string(p.size()) +
                          " does not match channel inputs " + std::to_string(w.n_in()));
  std::vector<double> cells(p.size() * w.n_out());
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = 0; y < w.n_out(); ++y) cells[x * w.n_out() + y] = p[x] * w.at(x, y);
  return JointDistribution(std::move(cells), p.size(), w.n_out());
}

// I(X;Y) = H(X) + H(Y) - H(X,Y), in bits. Can come out a hair below zero
// (order 1e-16) for independent pairs; callers that need hard nonnegativity
// should clamp on their side.
inline double mutual_information(const JointDistribution& j) {
  return entropy(j.marginal_x()) + entropy(j.marginal_y()) - joint_entropy(j);
}

// H(X|Y) = H(X,Y) - H(Y).
inline double conditional_entropy(const JointDistribution& j) {
  return joint_entropy(j) - entropy(j.marginal_y());
}

}  // namespace seminfo
