#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "seminfo/codec.hpp"
#include "seminfo/distortion.hpp"
#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/rng.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

// Outcome of a seeded source/channel run. Identical (model, n, seed) inputs
// reproduce this struct bit for bit.
struct SimReport {
  std::size_t n;
  std::uint64_t seed;
  double syntactic_error_rate;      // received symbol differs from sent
  double semantic_error_rate;       // received class differs from sent class
  double measured_bits_per_symbol;  // coder payload for the sent class stream
  double mean_semantic_distortion;  // class-level distortion, 0/1 by default
};

// Draws n source symbols, pushes each through the channel, and scores both
// the syntactic and the semantic damage. The sent class stream is also run
// through the semantic coder so the report carries an achieved rate next to
// the error statistics. A class-level distortion other than 0/1 mismatch can
// be supplied when meaning degrades gradually; it must be sized
// fx.num_classes() by fy.num_classes().
inline SimReport run_channel_sim(const Distribution& p, const Channel& w,
                                 const SynonymousMapping& fx, const SynonymousMapping& fy,
                                 std::size_t n, std::uint64_t seed,
                                 const DistortionMatrix* ds = nullptr) {
  if (n == 0) throw ValidationError("simulate: need at least one trial");
  if (p.size() != w.n_in())
    throw ValidationError("simulate: source size does not match channel inputs");
  if (fx.domain_size() != w.n_in())
    throw ValidationError("simulate: input mapping does not match channel inputs");
  if (fy.domain_size() != w.n_out())
    throw ValidationError("simulate: output mapping does not match channel outputs");
  if (ds && (ds->n_src() != fx.num_classes() || ds->n_rec() != fy.num_classes()))
    throw ValidationError("simulate: class distortion must be " +
                          std::to_string(fx.num_classes()) + "x" +
                          std::to_string(fy.num_classes()));

  const auto cum_x = p.cumulative();
  std::vector<std::vector<double>> cum_y(w.n_in());
  for (std::size_t x = 0; x < w.n_in(); ++x) cum_y[x] = w.row(x).cumulative();

  SplitMix64 rng(seed);
  std::vector<std::size_t> sent;
  sent.reserve(n);
  std::size_t syntactic_errors = 0;
  std::size_t semantic_errors = 0;
  double distortion_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t x = sample_index(cum_x, rng.next_double());
    const std::size_t y = sample_index(cum_y[x], rng.next_double());
    sent.push_back(x);
    if (y != x) ++syntactic_errors;
    const std::size_t cx = fx.class_of(x);
    const std::size_t cy = fy.class_of(y);
    if (cx != cy) ++semantic_errors;
    distortion_sum += ds ? ds->at(cx, cy) : (cx != cy ? 1.0 : 0.0);
  }

  const std::vector<std::uint8_t> coded = semantic_encode(sent, fx, p);
  const double nn = static_cast<double>(n);
  return SimReport{n,
                   seed,
                   static_cast<double>(syntactic_errors) / nn,
                   static_cast<double>(semantic_errors) / nn,
                   static_cast<double>(payload_bit_count(coded)) / nn,
                   distortion_sum / nn};
}

// Side-by-side coder comparison on one drawn sequence: full-fidelity stream
// vs class stream plus generative expansion.
struct CodecDemoReport {
  std::size_t n;
  std::uint64_t seed;
  double source_entropy_bits;          // H(X), the syntactic coder's ideal
  double semantic_entropy_bits;        // class entropy, the semantic ideal
  double syntactic_bits_per_symbol;    // achieved, full stream
  double semantic_bits_per_symbol;     // achieved, class stream
  double symbol_mismatch_rate;         // decoded symbol != original
  double mean_semantic_distortion;     // 0/1 class mismatch after decode
  bool class_stream_exact;             // decoded classes == original classes
};

inline CodecDemoReport run_codec_demo(const Distribution& p, const SynonymousMapping& f,
                                      const GenerativeDecoder& g, std::size_t n,
                                      std::uint64_t seed) {
  if (n == 0) throw ValidationError("codec demo: need at least one symbol");
  if (p.size() != f.domain_size())
    throw ValidationError("codec demo: source size does not match mapping domain");

  const auto cum = p.cumulative();
  SplitMix64 rng(seed);
  std::vector<std::size_t> xs;
  xs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) xs.push_back(sample_index(cum, rng.next_double()));

  const std::vector<std::uint8_t> syntactic = arithmetic_encode(xs, p);
  const std::vector<std::size_t> syn_back = arithmetic_decode(syntactic, n, p);
  if (syn_back != xs) throw CodecError("syntactic round trip failed");

  const std::vector<std::uint8_t> semantic = semantic_encode(xs, f, p);
  const std::vector<std::size_t> sem_back = generative_decode(semantic, n, f, g, p);

  std::size_t mismatches = 0;
  std::size_t class_errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sem_back[i] != xs[i]) ++mismatches;
    if (f.class_of(sem_back[i]) != f.class_of(xs[i])) ++class_errors;
  }
  const double nn = static_cast<double>(n);
  return CodecDemoReport{n,
                         seed,
                         entropy(p),
                         semantic_entropy(p, f),
                         static_cast<double>(payload_bit_count(syntactic)) / nn,
                         static_cast<double>(payload_bit_count(semantic)) / nn,
                         static_cast<double>(mismatches) / nn,
                         static_cast<double>(class_errors) / nn,
                         class_errors == 0};
}

}  // namespace seminfo
