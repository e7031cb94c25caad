#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seminfo/distribution.hpp"
#include "seminfo/errors.hpp"
#include "seminfo/synonymous.hpp"

namespace seminfo {

// Static-model range coder. Symbol frequencies are quantized to 16 bits with
// total kFreqTotal; every symbol of positive probability keeps a count of at
// least 1 so it stays encodable. The coder itself runs on a 32-bit range
// with a 64-bit carry accumulator and emits whole bytes.
inline constexpr std::uint32_t kFreqTotal = 65535;

// Container layout, all integers big-endian:
//   8  bytes  magic "SEMCODEC"
//   4  bytes  format version (1)
//   8  bytes  symbol count n
//   4  bytes  alphabet size a
//   2a bytes  quantized frequency table (count 0 marks an unmodeled symbol)
//   payload   coder output, byte-aligned; empty when n == 0
inline constexpr char kCodecMagic[8] = {'S', 'E', 'M', 'C', 'O', 'D', 'E', 'C'};
inline constexpr std::uint32_t kCodecVersion = 1;

struct QuantizedModel {
  std::vector<std::uint32_t> counts;  // each <= kFreqTotal, zeros allowed
  std::vector<std::uint32_t> cum;     // exclusive prefix sums, size a+1
  double entropy_bits;                // entropy of counts/kFreqTotal
};

// Deterministic largest-remainder quantization. Positive probabilities get
// count >= 1; the total is forced to kFreqTotal exactly by nudging the most
// under- or over-weighted symbols (ties resolve to the lowest index).
inline QuantizedModel quantize_model(const Distribution& p) {
  const std::size_t a = p.size();
  QuantizedModel qm;
  qm.counts.assign(a, 0);
  std::vector<double> raw(a, 0.0);
  std::size_t positive = 0;
  long long sum = 0;
  for (std::size_t i = 0; i < a; ++i) {
    if (p[i] <= 0.0) continue;
    ++positive;
    raw[i] = p[i] * static_cast<double>(kFreqTotal);
    qm.counts[i] = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(raw[i]));
    sum += qm.counts[i];
  }
  if (positive == 0) throw ValidationError("quantize: distribution has no positive mass");
  while (sum < static_cast<long long>(kFreqTotal)) {
    std::size_t pick = a;
    double need = -1.0;
    for (std::size_t i = 0; i < a; ++i) {
      if (p[i] <= 0.0) continue;
      const double deficit = raw[i] - static_cast<double>(qm.counts[i]);
      if (deficit > need) {
        need = deficit;
        pick = i;
      }
    }
    ++qm.counts[pick];
    ++sum;
  }
  while (sum > static_cast<long long>(kFreqTotal)) {
    std::size_t pick = a;
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a; ++i) {
      if (qm.counts[i] <= 1) continue;
      const double over = static_cast<double>(qm.counts[i]) - raw[i];
      if (over > excess) {
        excess = over;
        pick = i;
      }
    }
    if (pick == a)
      throw ValidationError("quantize: alphabet too large for 16-bit frequencies");
    --qm.counts[pick];
    --sum;
  }
  qm.cum.assign(a + 1, 0);
  for (std::size_t i = 0; i < a; ++i) qm.cum[i + 1] = qm.cum[i] + qm.counts[i];
  double h = 0.0;
  for (std::uint32_t c : qm.counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / static_cast<double>(kFreqTotal);
    h -= q * std::log2(q);
  }
  qm.entropy_bits = h;
  return qm;
}

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}
inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
  put_u32(out, static_cast<std::uint32_t>(v));
}

class ByteReader {
 public:
  ByteReader(const std::vector<std::uint8_t>& buf, std::size_t at) : buf_(buf), at_(at) {}
  std::uint8_t u8() {
    if (at_ >= buf_.size()) throw CodecError("bitstring truncated");
    return buf_[at_++];
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>((u8() << 8) | u8()); }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
    return v;
  }
  std::size_t pos() const { return at_; }
  std::size_t remaining() const { return buf_.size() - at_; }

 private:
  const std::vector<std::uint8_t>& buf_;
  std::size_t at_;
};

// Carryless range encoder. Carries ride in bits 32+ of low and resolve
// through the cache / pending-0xFF chain; flush always drains the chain
// because the fifth shift sees a zero window.
class RangeEncoder {
 public:
  explicit RangeEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
    const std::uint32_t r = range_ / total;
    low_ += static_cast<std::uint64_t>(r) * cum;
    if (cum + freq == total)
      range_ -= r * cum;  // last slot absorbs the division remainder
    else
      range_ = r * freq;
    while (range_ < kTop) {
      range_ <<= 8;
      shift_low();
    }
  }

  void flush() {
    for (int i = 0; i < 5; ++i) shift_low();
  }

 private:
  static constexpr std::uint32_t kTop = 1u << 24;

  void shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
      std::uint8_t byte = cache_;
      do {
        out_.push_back(static_cast<std::uint8_t>(byte + carry));
        byte = 0xFF;
      } while (--pending_ != 0);
      cache_ = static_cast<std::uint8_t>(static_cast<std::uint32_t>(low_) >> 24);
    }
    ++pending_;
    low_ = static_cast<std::uint64_t>(static_cast<std::uint32_t>(low_) << 8);
  }

  std::vector<std::uint8_t>& out_;
  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(ByteReader& in) : in_(in) {
    for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | in_.u8();
  }

  // Position of the code point inside the cumulative scale.
  std::uint32_t decode_target(std::uint32_t total) {
    r_ = range_ / total;
    const std::uint32_t v = code_ / r_;
    return v < total ? v : total - 1;
  }

  void decode_advance(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
    code_ -= cum * r_;
    if (cum + freq == total)
      range_ -= r_ * cum;
    else
      range_ = r_ * freq;
    while (range_ < kTop) {
      code_ = (code_ << 8) | in_.u8();
      range_ <<= 8;
    }
  }

 private:
  static constexpr std::uint32_t kTop = 1u << 24;

  ByteReader& in_;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
  std::uint32_t r_ = 0;
};

inline std::size_t container_header_bytes(std::size_t alphabet) {
  return 8 + 4 + 8 + 4 + 2 * alphabet;
}

}  // namespace detail

// Encodes a symbol sequence under a static model derived from p. Every
// symbol must have positive quantized frequency; a zero-mass symbol in xs is
// refused rather than silently mangled.
inline std::vector<std::uint8_t> arithmetic_encode(const std::vector<std::size_t>& xs,
                                                   const Distribution& p) {
  const QuantizedModel qm = quantize_model(p);
  const std::size_t a = p.size();
  std::vector<std::uint8_t> out;
  out.reserve(detail::container_header_bytes(a) + xs.size() / 2 + 16);
  for (char c : kCodecMagic) out.push_back(static_cast<std::uint8_t>(c));
  detail::put_u32(out, kCodecVersion);
  detail::put_u64(out, static_cast<std::uint64_t>(xs.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(a));
  for (std::uint32_t c : qm.counts) detail::put_u16(out, static_cast<std::uint16_t>(c));
  if (xs.empty()) return out;

  detail::RangeEncoder enc(out);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t s = xs[i];
    if (s >= a)
      throw ValidationError("encode: symbol " + std::to_string(s) +
                            " outside alphabet of size " + std::to_string(a));
    if (qm.counts[s] == 0)
      throw ValidationError("encode: symbol " + std::to_string(s) +
                            " has zero quantized frequency (position " + std::to_string(i) +
                            ")");
    enc.encode(qm.cum[s], qm.counts[s], kFreqTotal);
  }
  enc.flush();
  return out;
}

// Inverse of arithmetic_encode. The embedded frequency table must agree with
// the model quantized from p, the declared counts must match, and the
// payload must be exactly consumed; anything else raises CodecError.
inline std::vector<std::size_t> arithmetic_decode(const std::vector<std::uint8_t>& bytes,
                                                  std::size_t n, const Distribution& p) {
  detail::ByteReader in(bytes, 0);
  for (char m : kCodecMagic)
    if (in.u8() != static_cast<std::uint8_t>(m)) throw CodecError("bad container magic");
  const std::uint32_t version = in.u32();
  if (version != kCodecVersion)
    throw CodecError("unsupported container version " + std::to_string(version));
  const std::uint64_t stored_n = in.u64();
  if (stored_n != n)
    throw CodecError("container holds " + std::to_string(stored_n) +
                     " symbols, caller expected " + std::to_string(n));
  const std::uint32_t a = in.u32();
  if (a != p.size())
    throw CodecError("container alphabet " + std::to_string(a) +
                     " does not match model alphabet " + std::to_string(p.size()));
  const QuantizedModel qm = quantize_model(p);
  for (std::size_t i = 0; i < a; ++i)
    if (in.u16() != qm.counts[i])
      throw CodecError("frequency table mismatch at symbol " + std::to_string(i) +
                       "; bitstring was produced under a different model");
  std::vector<std::size_t> xs;
  xs.reserve(n);
  if (n == 0) {
    if (in.remaining() != 0) throw CodecError("trailing bytes after empty payload");
    return xs;
  }
  detail::RangeDecoder dec(in);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t target = dec.decode_target(kFreqTotal);
    // last symbol whose cumulative start is <= target
    std::size_t lo = 0, hi = a;
    while (lo + 1 < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (qm.cum[mid] <= target)
        lo = mid;
      else
        hi = mid;
    }
    xs.push_back(lo);
    dec.decode_advance(qm.cum[lo], qm.counts[lo], kFreqTotal);
  }
  if (in.remaining() != 0) throw CodecError("trailing bytes after payload");
  return xs;
}

// Meaning-only compression: map symbols to their classes and code the class
// stream under the pushforward law. The ideal cost drops from H(X) to the
// semantic entropy.
inline std::vector<std::uint8_t> semantic_encode(const std::vector<std::size_t>& xs,
                                                 const SynonymousMapping& f,
                                                 const Distribution& p) {
  if (p.size() != f.domain_size())
    throw ValidationError("semantic encode: model size does not match mapping domain");
  std::vector<std::size_t> zs;
  zs.reserve(xs.size());
  for (std::size_t s : xs) zs.push_back(f.class_of(s));
  return arithmetic_encode(zs, pushforward(p, f));
}

// Picks one concrete symbol per semantic class when expanding a decoded
// class stream. Consistency (f(rep(c)) == c) is enforced at construction, so
// a round trip can never leave its class.
class GenerativeDecoder {
 public:
  GenerativeDecoder(std::vector<std::size_t> representatives, const SynonymousMapping& f)
      : reps_(std::move(representatives)) {
    if (reps_.size() != f.num_classes())
      throw ValidationError("generative decoder: " + std::to_string(reps_.size()) +
                            " representatives for " + std::to_string(f.num_classes()) +
                            " classes");
    for (std::size_t c = 0; c < reps_.size(); ++c) {
      if (reps_[c] >= f.domain_size())
        throw ValidationError("generative decoder: representative " +
                              std::to_string(reps_[c]) + " outside symbol alphabet");
      if (f.class_of(reps_[c]) != c)
        throw ValidationError("generative decoder: representative " +
                              std::to_string(reps_[c]) + " does not belong to class " +
                              std::to_string(c));
    }
  }

  static GenerativeDecoder lowest_index(const SynonymousMapping& f) {
    std::vector<std::size_t> reps(f.num_classes());
    const auto members = f.members();
    for (std::size_t c = 0; c < members.size(); ++c) reps[c] = members[c].front();
    return GenerativeDecoder(std::move(reps), f);
  }

  // Most probable member of each class; ties go to the lowest index.
  static GenerativeDecoder most_probable(const SynonymousMapping& f, const Distribution& p) {
    if (p.size() != f.domain_size())
      throw ValidationError("generative decoder: model size does not match mapping domain");
    std::vector<std::size_t> reps(f.num_classes());
    const auto members = f.members();
    for (std::size_t c = 0; c < members.size(); ++c) {
      std::size_t best = members[c].front();
      for (std::size_t s : members[c])
        if (p[s] > p[best]) best = s;
      reps[c] = best;
    }
    return GenerativeDecoder(std::move(reps), f);
  }

  std::size_t representative(std::size_t cls) const {
    if (cls >= reps_.size())
      throw ValidationError("generative decoder: class " + std::to_string(cls) +
                            " out of range");
    return reps_[cls];
  }
  const std::vector<std::size_t>& representatives() const { return reps_; }

 private:
  std::vector<std::size_t> reps_;
};

// Decodes a semantic bitstring back to concrete symbols via representatives.
// The class sequence itself round-trips exactly; the symbol sequence agrees
// with the original up to within-class substitution.
inline std::vector<std::size_t> generative_decode(const std::vector<std::uint8_t>& bytes,
                                                  std::size_t n, const SynonymousMapping& f,
                                                  const GenerativeDecoder& g,
                                                  const Distribution& p) {
  if (p.size() != f.domain_size())
    throw ValidationError("generative decode: model size does not match mapping domain");
  const std::vector<std::size_t> zs = arithmetic_decode(bytes, n, pushforward(p, f));
  std::vector<std::size_t> xs;
  xs.reserve(n);
  for (std::size_t z : zs) xs.push_back(g.representative(z));
  return xs;
}

// Coder payload size in bits, excluding the fixed container header.
inline std::size_t payload_bit_count(const std::vector<std::uint8_t>& container) {
  detail::ByteReader in(container, 0);
  for (int i = 0; i < 12; ++i) in.u8();
  in.u64();
  const std::uint32_t a = in.u32();
  const std::size_t header = detail::container_header_bytes(a);
  if (container.size() < header) throw CodecError("bitstring truncated");
  return (container.size() - header) * 8;
}

}  // namespace seminfo
