#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seminfo/distortion.hpp"
#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/prior.hpp"
#include "seminfo/rate_distortion.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

// ---------------------------------------------------------------------------
// Model documents
//
// A model file is a single JSON object. Recognized keys:
//   alphabet        optional symbol names (array of strings)
//   source          source law over the input alphabet
//   channel         row-stochastic matrix, one row per input symbol
//   mapping         semantic classes of the input symbols
//   output_mapping  semantic classes of the channel output symbols
//   joint_mapping   explicit class grid over (input, output) pairs
//   distortion      inline distortion matrix
//   distortion_file path of a delimited grid, relative to the model file
//   features        inline feature vectors, one row per symbol
//   features_file   path of a feature table, relative to the model file
//   side_info       { pk, px_given_k, semantic_map }
// Unknown keys are rejected, as is any cross-reference that does not line up
// (mapping length vs alphabet, channel shape, and so on).
// ---------------------------------------------------------------------------

struct SideInfoSpec {
  std::vector<double> pk;
  std::vector<std::vector<double>> px_given_k;
  std::vector<std::size_t> semantic_map;
};

struct ModelDocument {
  std::string origin;  // path for diagnostics
  std::string dir;     // directory for resolving referenced files
  std::vector<std::string> alphabet;
  std::optional<std::vector<double>> source;
  std::optional<std::vector<std::vector<double>>> channel;
  std::optional<std::vector<std::size_t>> mapping;
  std::optional<std::vector<std::size_t>> output_mapping;
  std::optional<std::vector<std::vector<std::size_t>>> joint_mapping;
  std::optional<std::vector<std::vector<double>>> distortion;
  std::optional<std::string> distortion_file;
  std::optional<std::vector<std::vector<double>>> features;
  std::optional<std::string> features_file;
  std::optional<SideInfoSpec> side_info;

  Distribution make_source() const {
    if (!source) throw ValidationError(origin + ": model has no 'source'");
    return Distribution(*source, "source");
  }

  Channel make_channel() const {
    if (!channel) throw ValidationError(origin + ": model has no 'channel'");
    return Channel(*channel);
  }

  SynonymousMapping make_mapping() const {
    if (!mapping) throw ValidationError(origin + ": model has no 'mapping'");
    return SynonymousMapping(*mapping, "mapping");
  }

  SynonymousMapping make_mapping_or_identity(std::size_t n) const {
    if (mapping) return SynonymousMapping(*mapping, "mapping");
    return SynonymousMapping::identity(n);
  }

  // Output-side classes; falls back to 'mapping' for a square channel, then
  // to the identity.
  SynonymousMapping make_output_mapping_or_identity(std::size_t n_out) const {
    if (output_mapping) return SynonymousMapping(*output_mapping, "output_mapping");
    if (mapping && mapping->size() == n_out) return SynonymousMapping(*mapping, "mapping");
    return SynonymousMapping::identity(n_out);
  }

  DistortionMatrix make_distortion() const {
    if (distortion && distortion_file)
      throw ValidationError(origin + ": both 'distortion' and 'distortion_file' given");
    if (distortion) return DistortionMatrix::from_rows(*distortion);
    if (distortion_file)
      return load_distortion((std::filesystem::path(dir) / *distortion_file).string());
    throw ValidationError(origin + ": model provides no distortion");
  }

  FeatureTable make_features() const {
    if (features && features_file)
      throw ValidationError(origin + ": both 'features' and 'features_file' given");
    if (features) return FeatureTable(*features);
    if (features_file)
      return load_features((std::filesystem::path(dir) / *features_file).string());
    throw ValidationError(origin + ": model provides no features");
  }

  SideInfoModel make_side_info() const {
    if (!side_info) throw ValidationError(origin + ": model has no 'side_info'");
    std::vector<Distribution> rows;
    rows.reserve(side_info->px_given_k.size());
    for (std::size_t k = 0; k < side_info->px_given_k.size(); ++k)
      rows.emplace_back(side_info->px_given_k[k],
                        "side_info.px_given_k[" + std::to_string(k) + "]");
    return SideInfoModel(Distribution(side_info->pk, "side_info.pk"), std::move(rows),
                         SynonymousMapping(side_info->semantic_map, "side_info.semantic_map"));
  }
};

namespace detail {

using nlohmann::json;

inline std::vector<double> number_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ValidationError(field + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

inline std::vector<std::size_t> index_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_number_integer())
      throw ValidationError(where + ": expected an integer");
    const auto v = j[i].get<long long>();
    if (v < 0) throw ValidationError(where + ": negative index");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline std::vector<std::vector<double>> number_matrix(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array of rows");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number_array(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::vector<std::size_t>> index_matrix(const json& j,
                                                          const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array of rows");
  std::vector<std::vector<std::size_t>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(index_array(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

// Parses and fully validates a model document. Unreadable files raise
// IoError; malformed JSON or any schema/consistency violation raises
// ValidationError naming the offending field.
inline ModelDocument parse_model_text(const std::string& text, const std::string& origin,
                                      const std::string& dir) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": not valid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ValidationError(origin + ": top level must be an object");

  static const char* known[] = {"alphabet",      "source",        "channel",
                                "mapping",       "output_mapping", "joint_mapping",
                                "distortion",    "distortion_file", "features",
                                "features_file", "side_info"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ValidationError(origin + ": unknown key '" + it.key() + "'");
  }

  ModelDocument doc;
  doc.origin = origin;
  doc.dir = dir;

  if (j.contains("alphabet")) {
    const auto& arr = j["alphabet"];
    if (!arr.is_array()) throw ValidationError("alphabet: expected an array of strings");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string())
        throw ValidationError("alphabet[" + std::to_string(i) + "]: expected a string");
      doc.alphabet.push_back(arr[i].get<std::string>());
    }
  }
  if (j.contains("source")) doc.source = detail::number_array(j["source"], "source");
  if (j.contains("channel")) doc.channel = detail::number_matrix(j["channel"], "channel");
  if (j.contains("mapping")) doc.mapping = detail::index_array(j["mapping"], "mapping");
  if (j.contains("output_mapping"))
    doc.output_mapping = detail::index_array(j["output_mapping"], "output_mapping");
  if (j.contains("joint_mapping"))
    doc.joint_mapping = detail::index_matrix(j["joint_mapping"], "joint_mapping");
  if (j.contains("distortion"))
    doc.distortion = detail::number_matrix(j["distortion"], "distortion");
  if (j.contains("distortion_file")) {
    if (!j["distortion_file"].is_string())
      throw ValidationError("distortion_file: expected a string");
    doc.distortion_file = j["distortion_file"].get<std::string>();
  }
  if (j.contains("features")) doc.features = detail::number_matrix(j["features"], "features");
  if (j.contains("features_file")) {
    if (!j["features_file"].is_string())
      throw ValidationError("features_file: expected a string");
    doc.features_file = j["features_file"].get<std::string>();
  }
  if (j.contains("side_info")) {
    const auto& si = j["side_info"];
    if (!si.is_object()) throw ValidationError("side_info: expected an object");
    for (auto it = si.begin(); it != si.end(); ++it)
      if (it.key() != "pk" && it.key() != "px_given_k" && it.key() != "semantic_map")
        throw ValidationError("side_info: unknown key '" + it.key() + "'");
    if (!si.contains("pk") || !si.contains("px_given_k") || !si.contains("semantic_map"))
      throw ValidationError("side_info: needs pk, px_given_k and semantic_map");
    SideInfoSpec spec;
    spec.pk = detail::number_array(si["pk"], "side_info.pk");
    spec.px_given_k = detail::number_matrix(si["px_given_k"], "side_info.px_given_k");
    spec.semantic_map = detail::index_array(si["semantic_map"], "side_info.semantic_map");
    doc.side_info = std::move(spec);
  }

  // Numeric validation through the typed constructors, so diagnostics carry
  // the field name.
  std::optional<std::size_t> n_in;
  auto check_n_in = [&](std::size_t n, const std::string& who) {
    if (n_in && *n_in != n)
      throw ValidationError(origin + ": " + who + " implies an input alphabet of " +
                            std::to_string(n) + " symbols, but earlier fields imply " +
                            std::to_string(*n_in));
    n_in = n;
  };
  if (doc.source) {
    Distribution s = doc.make_source();
    check_n_in(s.size(), "source");
  }
  std::optional<std::size_t> n_out;
  if (doc.channel) {
    Channel w = doc.make_channel();
    check_n_in(w.n_in(), "channel");
    n_out = w.n_out();
  }
  if (!doc.alphabet.empty() && n_in && doc.alphabet.size() != *n_in)
    throw ValidationError(origin + ": alphabet names " + std::to_string(doc.alphabet.size()) +
                          " symbols, model uses " + std::to_string(*n_in));
  if (doc.mapping) {
    SynonymousMapping f = doc.make_mapping();
    check_n_in(f.domain_size(), "mapping");
  }
  if (doc.output_mapping) {
    if (!n_out)
      throw ValidationError(origin + ": output_mapping given without a channel");
    SynonymousMapping fy(*doc.output_mapping, "output_mapping");
    if (fy.domain_size() != *n_out)
      throw ValidationError(origin + ": output_mapping covers " +
                            std::to_string(fy.domain_size()) + " symbols, channel emits " +
                            std::to_string(*n_out));
  }
  if (doc.joint_mapping) {
    if (!n_in || !n_out)
      throw ValidationError(origin + ": joint_mapping needs source and channel context");
    std::vector<std::size_t> cells;
    for (std::size_t r = 0; r < doc.joint_mapping->size(); ++r) {
      if ((*doc.joint_mapping)[r].size() != *n_out)
        throw ValidationError(origin + ": joint_mapping[" + std::to_string(r) +
                              "] has wrong width");
      for (std::size_t c : (*doc.joint_mapping)[r]) cells.push_back(c);
    }
    if (doc.joint_mapping->size() != *n_in)
      throw ValidationError(origin + ": joint_mapping has wrong height");
    JointSynonymousMapping jm(std::move(cells), *n_in, *n_out);
  }
  if (doc.distortion && doc.distortion_file)
    throw ValidationError(origin + ": both 'distortion' and 'distortion_file' given");
  if (doc.distortion) DistortionMatrix::from_rows(*doc.distortion);
  if (doc.features && doc.features_file)
    throw ValidationError(origin + ": both 'features' and 'features_file' given");
  if (doc.features) {
    FeatureTable t(*doc.features);
    if (n_in && t.size() != *n_in)
      throw ValidationError(origin + ": features cover " + std::to_string(t.size()) +
                            " symbols, model uses " + std::to_string(*n_in));
  }
  if (doc.side_info) doc.make_side_info();

  return doc;
}

inline ModelDocument parse_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read model file: " + path);
  return parse_model_text(buf.str(), path,
                          std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------
// Deterministic output formatting. All floating values are printed with 12
// significant digits via one snprintf path, so identical inputs produce
// byte-identical files.
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Insertion-ordered JSON emitter; just enough for the report documents.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object() {
    comma();
    out_ += '{';
    fresh_ = true;
    depth_ += 1;
    return *this;
  }
  JsonWriter& end_object() {
    out_ += '}';
    fresh_ = false;
    depth_ -= 1;
    return *this;
  }
  JsonWriter& begin_array() {
    comma();
    out_ += '[';
    fresh_ = true;
    depth_ += 1;
    return *this;
  }
  JsonWriter& end_array() {
    out_ += ']';
    fresh_ = false;
    depth_ -= 1;
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    comma();
    escape(k);
    out_ += ':';
    fresh_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    comma();
    out_ += format_number(v);
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    comma();
    out_ += std::to_string(v);
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(int v) {
    comma();
    out_ += std::to_string(v);
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    fresh_ = false;
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::string& v) {
    comma();
    escape(v);
    fresh_ = false;
    return *this;
  }

 private:
  void comma() {
    if (!fresh_ && depth_ > 0) out_ += ',';
    fresh_ = false;
  }
  void escape(const std::string& s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
            out_ += buf;
          } else {
            out_ += ch;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
  int depth_ = 0;
};

// Curve files: a fixed header line, then one row per point.
inline std::string curve_csv(const RDCurve& curve) {
  std::string out = "lambda,rate_bits,distortion\n";
  for (const auto& pt : curve.points) {
    out += format_number(pt.lambda);
    out += ',';
    out += format_number(pt.rate);
    out += ',';
    out += format_number(pt.distortion);
    out += '\n';
  }
  return out;
}

}  // namespace seminfo
