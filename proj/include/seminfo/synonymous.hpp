#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"

namespace seminfo {

namespace detail {

// Class labels must be dense: every index 0..m-1 used at least once. A gap
// means the caller mislabeled something, so it is rejected rather than
// compacted.
inline std::size_t validate_dense_classes(const std::vector<std::size_t>& labels,
                                          const std::string& what) {
  if (labels.empty()) throw ValidationError(what + ": empty mapping");
  std::size_t m = 0;
  for (std::size_t c : labels)
    if (c + 1 > m) m = c + 1;
  if (m > labels.size())
    throw ValidationError(what + ": class index " + std::to_string(m - 1) +
                          " exceeds what " + std::to_string(labels.size()) +
                          " symbols can cover");
  std::vector<bool> seen(m, false);
  for (std::size_t c : labels) seen[c] = true;
  for (std::size_t c = 0; c < m; ++c)
    if (!seen[c])
      throw ValidationError(what + ": class " + std::to_string(c) +
                            " has no members (labels must be dense)");
  return m;
}

}  // namespace detail

// Surjection from symbols onto semantic classes 0..num_classes()-1. Symbols
// sharing a class are synonyms: distinct on the wire, identical in meaning.
class SynonymousMapping {
 public:
  explicit SynonymousMapping(std::vector<std::size_t> class_of,
                             const std::string& what = "mapping")
      : class_of_(std::move(class_of)) {
    num_classes_ = detail::validate_dense_classes(class_of_, what);
  }

  static SynonymousMapping identity(std::size_t n) {
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    return SynonymousMapping(std::move(c));
  }

  std::size_t domain_size() const { return class_of_.size(); }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t class_of(std::size_t symbol) const {
    if (symbol >= class_of_.size())
      throw ValidationError("mapping: symbol " + std::to_string(symbol) +
                            " outside domain of size " + std::to_string(class_of_.size()));
    return class_of_[symbol];
  }
  const std::vector<std::size_t>& labels() const { return class_of_; }

  bool is_identity() const { return num_classes_ == class_of_.size(); }

  // Member symbols per class, ascending inside each class.
  std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(num_classes_);
    for (std::size_t i = 0; i < class_of_.size(); ++i) out[class_of_[i]].push_back(i);
    return out;
  }

 private:
  std::vector<std::size_t> class_of_;
  std::size_t num_classes_;
};

// g after f: symbols -> f classes -> g classes.
inline SynonymousMapping compose(const SynonymousMapping& f, const SynonymousMapping& g) {
  if (g.domain_size() != f.num_classes())
    throw ValidationError("compose: outer mapping domain " +
                          std::to_string(g.domain_size()) + " does not match inner class count " +
                          std::to_string(f.num_classes()));
  std::vector<std::size_t> c(f.domain_size());
  for (std::size_t i = 0; i < f.domain_size(); ++i) c[i] = g.class_of(f.class_of(i));
  return SynonymousMapping(std::move(c));
}

// Synonym structure over pairs (x, y). The product construction gives each
// (fx class, fy class) combination its own joint class; arbitrary cell grids
// are accepted too, as long as labels are dense.
class JointSynonymousMapping {
 public:
  JointSynonymousMapping(std::vector<std::size_t> cells, std::size_t n_x, std::size_t n_y)
      : cells_(std::move(cells)), n_x_(n_x), n_y_(n_y), product_(false) {
    if (n_x_ == 0 || n_y_ == 0) throw ValidationError("joint mapping: empty axis");
    if (cells_.size() != n_x_ * n_y_)
      throw ValidationError("joint mapping: cell count " + std::to_string(cells_.size()) +
                            " does not match " + std::to_string(n_x_) + "x" +
                            std::to_string(n_y_));
    num_classes_ = detail::validate_dense_classes(cells_, "joint mapping");
  }

  static JointSynonymousMapping product(const SynonymousMapping& fx,
                                        const SynonymousMapping& fy) {
    const std::size_t my = fy.num_classes();
    std::vector<std::size_t> cells(fx.domain_size() * fy.domain_size());
    for (std::size_t x = 0; x < fx.domain_size(); ++x)
      for (std::size_t y = 0; y < fy.domain_size(); ++y)
        cells[x * fy.domain_size() + y] = fx.class_of(x) * my + fy.class_of(y);
    JointSynonymousMapping jm(std::move(cells), fx.domain_size(), fy.domain_size());
    jm.product_ = true;
    return jm;
  }

  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t class_of(std::size_t x, std::size_t y) const { return cells_[x * n_y_ + y]; }

  // True only for mappings built by product(); a hand-assembled grid that
  // happens to factor is still treated as general.
  bool is_product() const { return product_; }

 private:
  std::vector<std::size_t> cells_;
  std::size_t n_x_;
  std::size_t n_y_;
  std::size_t num_classes_;
  bool product_;
};

// Class-mass law: adds up the probability of each semantic class.
inline Distribution pushforward(const Distribution& p, const SynonymousMapping& f) {
  if (p.size() != f.domain_size())
    throw ValidationError("pushforward: distribution size " + std::to_string(p.size()) +
                          " does not match mapping domain " +
                          std::to_string(f.domain_size()));
  std::vector<double> m(f.num_classes(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) m[f.class_of(i)] += p[i];
  return Distribution(std::move(m), "pushforward");
}

// Entropy of the class masses, bits. Never exceeds entropy(p); equal exactly
// when f is injective on the support of p.
inline double semantic_entropy(const Distribution& p, const SynonymousMapping& f) {
  return entropy(pushforward(p, f));
}

inline double semantic_joint_entropy(const JointDistribution& j,
                                     const JointSynonymousMapping& jm) {
  if (j.n_x() != jm.n_x() || j.n_y() != jm.n_y())
    throw ValidationError("semantic joint entropy: joint is " + std::to_string(j.n_x()) +
                          "x" + std::to_string(j.n_y()) + ", mapping is " +
                          std::to_string(jm.n_x()) + "x" + std::to_string(jm.n_y()));
  std::vector<double> mass(jm.num_classes(), 0.0);
  for (std::size_t x = 0; x < j.n_x(); ++x)
    for (std::size_t y = 0; y < j.n_y(); ++y) mass[jm.class_of(x, y)] += j.at(x, y);
  return detail::entropy_bits(mass);
}

// Two readings of semantic mutual information over a coarsened joint law.
//
//   Eq5: Hs(X~) + Hs(Y~) - Hs(X~,Y~).  All three terms coarsened. With a
//        product joint mapping this is the mutual information of the
//        class-level pair, so it never exceeds I(X;Y).
//   Up:  H(X) + H(Y) - Hs(X~,Y~).  Syntactic marginals with a coarsened
//        joint term; dominates I(X;Y) pointwise, which is what makes
//        semantic capacity able to exceed classical capacity.
enum class MiVariant { Eq5, Up };

inline double semantic_mutual_information(const JointDistribution& j,
                                          const SynonymousMapping& fx,
                                          const SynonymousMapping& fy,
                                          const JointSynonymousMapping& jm,
                                          MiVariant variant) {
  if (fx.domain_size() != j.n_x())
    throw ValidationError("semantic mi: fx domain does not match joint rows");
  if (fy.domain_size() != j.n_y())
    throw ValidationError("semantic mi: fy domain does not match joint columns");
  if (jm.n_x() != j.n_x() || jm.n_y() != j.n_y())
    throw ValidationError("semantic mi: joint mapping shape mismatch");
  const double hs_joint = semantic_joint_entropy(j, jm);
  if (variant == MiVariant::Up)
    return entropy(j.marginal_x()) + entropy(j.marginal_y()) - hs_joint;
  return semantic_entropy(j.marginal_x(), fx) + semantic_entropy(j.marginal_y(), fy) -
         hs_joint;
}

inline double semantic_mutual_information(const JointDistribution& j,
                                          const SynonymousMapping& fx,
                                          const SynonymousMapping& fy, MiVariant variant) {
  return semantic_mutual_information(j, fx, fy, JointSynonymousMapping::product(fx, fy),
                                     variant);
}

enum class SemanticOutcome { Preserved, SemanticError };

// A transmission preserves meaning when the received symbol lands in the same
// class as the sent one. fx and fy must label classes from a shared index set.
inline SemanticOutcome semantic_resilience_indicator(std::size_t x, std::size_t y,
                                                     const SynonymousMapping& fx,
                                                     const SynonymousMapping& fy) {
  return fx.class_of(x) == fy.class_of(y) ? SemanticOutcome::Preserved
                                          : SemanticOutcome::SemanticError;
}

}  // namespace seminfo
