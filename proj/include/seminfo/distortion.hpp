#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/errors.hpp"

namespace seminfo {

// Per-pair cost d(source symbol, reconstruction symbol). Entries are finite
// and nonnegative; no other structure is assumed (not symmetric, zero
// diagonal not required).
class DistortionMatrix {
 public:
  DistortionMatrix(std::vector<double> cells, std::size_t n_src, std::size_t n_rec)
      : cells_(std::move(cells)), n_src_(n_src), n_rec_(n_rec) {
    if (n_src_ == 0 || n_rec_ == 0) throw ValidationError("distortion: empty axis");
    if (cells_.size() != n_src_ * n_rec_)
      throw ValidationError("distortion: cell count " + std::to_string(cells_.size()) +
                            " does not match " + std::to_string(n_src_) + "x" +
                            std::to_string(n_rec_));
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (!std::isfinite(cells_[i]))
        throw ValidationError("distortion: non-finite entry at row " +
                              std::to_string(i / n_rec_) + ", col " +
                              std::to_string(i % n_rec_));
      if (cells_[i] < 0.0)
        throw ValidationError("distortion: negative entry at row " +
                              std::to_string(i / n_rec_) + ", col " +
                              std::to_string(i % n_rec_));
    }
  }

  static DistortionMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("distortion: no rows");
    const std::size_t width = rows[0].size();
    std::vector<double> cells;
    cells.reserve(rows.size() * width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != width)
        throw ValidationError("distortion: row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(width));
      cells.insert(cells.end(), rows[i].begin(), rows[i].end());
    }
    return DistortionMatrix(std::move(cells), rows.size(), width);
  }

  std::size_t n_src() const { return n_src_; }
  std::size_t n_rec() const { return n_rec_; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * n_rec_ + j]; }
  const std::vector<double>& cells() const { return cells_; }

  double row_min(std::size_t i) const {
    double m = cells_[i * n_rec_];
    for (std::size_t j = 1; j < n_rec_; ++j) m = std::min(m, cells_[i * n_rec_ + j]);
    return m;
  }

  // Smallest strictly positive entry; 0 if every entry is zero.
  double min_positive() const {
    double m = 0.0;
    for (double v : cells_)
      if (v > 0.0 && (m == 0.0 || v < m)) m = v;
    return m;
  }

 private:
  std::vector<double> cells_;
  std::size_t n_src_;
  std::size_t n_rec_;
};

// 0/1 loss on semantic classes: free inside a class, unit cost across.
inline DistortionMatrix class_mismatch_distortion(std::size_t num_classes) {
  if (num_classes == 0) throw ValidationError("class mismatch: zero classes");
  std::vector<double> cells(num_classes * num_classes, 1.0);
  for (std::size_t c = 0; c < num_classes; ++c) cells[c * num_classes + c] = 0.0;
  return DistortionMatrix(std::move(cells), num_classes, num_classes);
}

// One feature vector per symbol; all vectors share a dimension and none may
// be all-zero (cosine would be undefined).
class FeatureTable {
 public:
  explicit FeatureTable(std::vector<std::vector<double>> vectors)
      : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw ValidationError("features: empty table");
    const std::size_t dim = vectors_[0].size();
    if (dim == 0) throw ValidationError("features: zero-dimensional vectors");
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
      if (vectors_[i].size() != dim)
        throw ValidationError("features: vector " + std::to_string(i) + " has dimension " +
                              std::to_string(vectors_[i].size()) + ", expected " +
                              std::to_string(dim));
      double norm2 = 0.0;
      for (double v : vectors_[i]) {
        if (!std::isfinite(v))
          throw ValidationError("features: non-finite component in vector " +
                                std::to_string(i));
        norm2 += v * v;
      }
      if (norm2 == 0.0)
        throw ValidationError("features: vector " + std::to_string(i) + " is all zero");
    }
  }

  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return vectors_[0].size(); }
  const std::vector<double>& at(std::size_t i) const { return vectors_[i]; }

 private:
  std::vector<std::vector<double>> vectors_;
};

// d(i,j) = (1 - cos(v_i, v_j)) / 2, mapped into [0,1]. Symmetric, zero
// diagonal by construction.
inline DistortionMatrix cosine_distortion(const FeatureTable& t) {
  const std::size_t n = t.size();
  std::vector<double> norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : t.at(i)) s += v * v;
    norm[i] = std::sqrt(s);
  }
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < t.dim(); ++k) dot += t.at(i)[k] * t.at(j)[k];
      double c = dot / (norm[i] * norm[j]);
      if (c > 1.0) c = 1.0;
      if (c < -1.0) c = -1.0;
      const double d = (1.0 - c) / 2.0;
      cells[i * n + j] = d;
      cells[j * n + i] = d;
    }
  }
  return DistortionMatrix(std::move(cells), n, n);
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double parse_number(const std::string& tok, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ValidationError(where + ": cannot parse '" + tok + "' as a number");
  }
  if (pos != tok.size())
    throw ValidationError(where + ": trailing junk in '" + tok + "'");
  return v;
}

}  // namespace detail

// Delimited numeric grid, one row per source symbol, comma or whitespace
// separated. Blank lines and lines starting with '#' are skipped.
inline DistortionMatrix load_distortion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open distortion file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    row.reserve(fields.size());
    const std::string where = path + ":" + std::to_string(lineno);
    for (const auto& f : fields) row.push_back(detail::parse_number(f, where));
    if (!rows.empty() && row.size() != rows[0].size())
      throw ValidationError(where + ": row has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(rows[0].size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path + ": no data rows");
  return DistortionMatrix::from_rows(rows);
}

// Feature file: one row per symbol, "index c1 c2 ... ck". Indices must cover
// 0..n-1 exactly once; rows may appear in any order.
inline FeatureTable load_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature file: " + path);
  std::vector<std::pair<std::size_t, std::vector<double>>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() < 2)
      throw ValidationError(where + ": need a symbol index and at least one component");
    double idx_raw = detail::parse_number(fields[0], where);
    if (idx_raw < 0 || idx_raw != std::floor(idx_raw))
      throw ValidationError(where + ": symbol index must be a nonnegative integer");
    std::vector<double> comps;
    comps.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i)
      comps.push_back(detail::parse_number(fields[i], where));
    entries.emplace_back(static_cast<std::size_t>(idx_raw), std::move(comps));
  }
  if (entries.empty()) throw ValidationError(path + ": no data rows");
  std::vector<std::vector<double>> vectors(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (auto& [idx, comps] : entries) {
    if (idx >= entries.size())
      throw ValidationError(path + ": symbol index " + std::to_string(idx) +
                            " out of range for " + std::to_string(entries.size()) + " rows");
    if (seen[idx])
      throw ValidationError(path + ": duplicate symbol index " + std::to_string(idx));
    seen[idx] = true;
    vectors[idx] = std::move(comps);
  }
  return FeatureTable(std::move(vectors));
}

// Writes a grid that load_distortion can read back.
inline void save_distortion(const DistortionMatrix& d, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < d.n_src(); ++i) {
    for (std::size_t j = 0; j < d.n_rec(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", d.at(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace seminfo
