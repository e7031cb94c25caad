#include <cstdint>
#include <numeric>

#include <catch2/catch_amalgamated.hpp>

#include "seminfo/codec.hpp"
#include "test_support.hpp"

using namespace seminfo;
using Catch::Approx;

namespace {

std::vector<std::size_t> draw_sequence(const Distribution& p, std::size_t n,
                                       SplitMix64& rng) {
  const auto cum = p.cumulative();
  std::vector<std::size_t> xs(n);
  for (auto& x : xs) x = sample_index(cum, rng.next_double());
  return xs;
}

}  // namespace

TEST_CASE("quantized model accounting") {
  SECTION("counts fill the fixed total and keep support") {
    const Distribution p({0.5, 0.25, 0.125, 0.125}, "p");
    const QuantizedModel qm = quantize_model(p);
    REQUIRE(std::accumulate(qm.counts.begin(), qm.counts.end(), 0u) == kFreqTotal);
    for (std::size_t i = 0; i < 4; ++i) REQUIRE(qm.counts[i] >= 1);
    REQUIRE(qm.cum.back() == kFreqTotal);
    REQUIRE(qm.entropy_bits == Approx(1.75).margin(1e-3));
  }
  SECTION("single symbol occupies everything") {
    const QuantizedModel qm = quantize_model(Distribution({1.0}, "point"));
    REQUIRE(qm.counts[0] == kFreqTotal);
  }
  SECTION("tiny but positive masses survive quantization") {
    std::vector<double> v(20, 1e-6);
    v[0] = 1.0 - 19e-6;
    const QuantizedModel qm = quantize_model(Distribution(v, "skewed"));
    for (std::size_t i = 0; i < 20; ++i) REQUIRE(qm.counts[i] >= 1);
    REQUIRE(std::accumulate(qm.counts.begin(), qm.counts.end(), 0u) == kFreqTotal);
  }
  SECTION("zero mass means zero count") {
    const QuantizedModel qm = quantize_model(Distribution({1.0, 0.0}, "p"));
    REQUIRE(qm.counts[1] == 0);
  }
}

TEST_CASE("container layout is fixed and big-endian") {
  const Distribution p({0.75, 0.25}, "p");
  const auto bytes = arithmetic_encode({0, 1, 0}, p);
  REQUIRE(bytes.size() >= detail::container_header_bytes(2));
  REQUIRE(bytes[0] == 'S');
  REQUIRE(bytes[7] == 'C');
  // version 1 as four big-endian bytes
  REQUIRE(bytes[8] == 0);
  REQUIRE(bytes[11] == 1);
  // symbol count 3 as eight big-endian bytes
  REQUIRE(bytes[12] == 0);
  REQUIRE(bytes[19] == 3);
  // alphabet size 2
  REQUIRE(bytes[23] == 2);
}

TEST_CASE("round trips across alphabet sizes") {
  SplitMix64 rng(21);
  for (std::size_t a = 1; a <= 16; ++a) {
    for (int t = 0; t < 12; ++t) {
      const Distribution p = testsup::random_pmf(rng, a, 0.2);
      const std::size_t n = rng.next_u64() % 400;
      std::vector<std::size_t> xs;
      xs.reserve(n);
      const auto cum = p.cumulative();
      for (std::size_t i = 0; i < n; ++i) xs.push_back(sample_index(cum, rng.next_double()));
      const auto bytes = arithmetic_encode(xs, p);
      REQUIRE(arithmetic_decode(bytes, xs.size(), p) == xs);
    }
  }
}

TEST_CASE("degenerate streams") {
  const Distribution p({0.75, 0.25}, "p");
  SECTION("empty sequence is header only") {
    const auto bytes = arithmetic_encode({}, p);
    REQUIRE(bytes.size() == detail::container_header_bytes(2));
    REQUIRE(arithmetic_decode(bytes, 0, p).empty());
    REQUIRE(payload_bit_count(bytes) == 0);
  }
  SECTION("length one") {
    const auto bytes = arithmetic_encode({1}, p);
    REQUIRE(arithmetic_decode(bytes, 1, p) == std::vector<std::size_t>{1});
  }
  SECTION("constant stream under a near-point-mass model stays tiny") {
    std::vector<double> v{1.0 - 1e-4, 1e-4};
    const Distribution skew(v, "skew");
    const std::vector<std::size_t> xs(1000, 0);
    const auto bytes = arithmetic_encode(xs, skew);
    REQUIRE(payload_bit_count(bytes) < 100);
    REQUIRE(arithmetic_decode(bytes, 1000, skew) == xs);
  }
}

TEST_CASE("payload length tracks the ideal codelength") {
  SplitMix64 rng(23);
  double total_bits = 0.0;
  double total_model_bits = 0.0;
  for (int t = 0; t < 30; ++t) {
    const std::size_t a = 2 + rng.next_u64() % 9;
    const Distribution p = testsup::random_pmf(rng, a, 0.0);
    const QuantizedModel qm = quantize_model(p);
    const std::size_t n = 2000;
    const auto xs = draw_sequence(p, n, rng);
    const auto bytes = arithmetic_encode(xs, p);
    const double bits = static_cast<double>(payload_bit_count(bytes));
    // Pointwise guarantee: at most 64 bits over the ideal codelength of this
    // very sequence under the quantized frequencies.
    double ideal = 0.0;
    for (std::size_t x : xs)
      ideal += std::log2(static_cast<double>(kFreqTotal) / qm.counts[x]);
    REQUIRE(bits <= ideal + 64.0);
    total_bits += bits;
    total_model_bits += static_cast<double>(n) * qm.entropy_bits;
  }
  // On average over sequences drawn from the model itself, the payload is
  // within the per-stream flush slack of n times the quantized entropy.
  REQUIRE(total_bits <= total_model_bits + 30.0 * 64.0);
}

TEST_CASE("encode refuses what the model cannot carry") {
  const Distribution p({1.0, 0.0}, "p");
  REQUIRE_THROWS_AS(arithmetic_encode({0, 1}, p), ValidationError);
  REQUIRE_THROWS_AS(arithmetic_encode({2}, Distribution({0.5, 0.5}, "q")),
                    ValidationError);
}

TEST_CASE("decode rejects damaged containers") {
  const Distribution p({0.75, 0.25}, "p");
  const auto good = arithmetic_encode({0, 1, 0, 0, 1, 0, 0, 0}, p);

  SECTION("bad magic") {
    auto bytes = good;
    bytes[0] = 'X';
    REQUIRE_THROWS_AS(arithmetic_decode(bytes, 8, p), CodecError);
  }
  SECTION("bad version") {
    auto bytes = good;
    bytes[11] = 9;
    REQUIRE_THROWS_AS(arithmetic_decode(bytes, 8, p), CodecError);
  }
  SECTION("count disagrees with caller") {
    REQUIRE_THROWS_AS(arithmetic_decode(good, 7, p), CodecError);
  }
  SECTION("model mismatch shows up in the embedded table") {
    REQUIRE_THROWS_AS(arithmetic_decode(good, 8, Distribution({0.25, 0.75}, "q")),
                      CodecError);
  }
  SECTION("truncation") {
    auto bytes = good;
    bytes.pop_back();
    REQUIRE_THROWS_AS(arithmetic_decode(bytes, 8, p), CodecError);
  }
  SECTION("trailing garbage") {
    auto bytes = good;
    bytes.push_back(0);
    REQUIRE_THROWS_AS(arithmetic_decode(bytes, 8, p), CodecError);
  }
}

TEST_CASE("class stream coding") {
  const Distribution p({0.5, 0.25, 0.125, 0.125}, "p");
  const SynonymousMapping f({0, 0, 1, 1}, "f");
  SplitMix64 rng(29);
  const auto xs = draw_sequence(p, 5000, rng);

  const auto semantic = semantic_encode(xs, f, p);
  std::vector<std::size_t> zs;
  zs.reserve(xs.size());
  for (std::size_t x : xs) zs.push_back(f.class_of(x));
  REQUIRE(arithmetic_decode(semantic, xs.size(), pushforward(p, f)) == zs);

  SECTION("identity mapping changes nothing") {
    const SynonymousMapping id = SynonymousMapping::identity(4);
    REQUIRE(semantic_encode(xs, id, p) == arithmetic_encode(xs, p));
  }
  SECTION("single class collapses to almost nothing") {
    const SynonymousMapping all({0, 0, 0, 0}, "all");
    REQUIRE(payload_bit_count(semantic_encode(xs, all, p)) < 100);
  }
}

TEST_CASE("representative decoding preserves classes") {
  const Distribution p({0.5, 0.25, 0.125, 0.125}, "p");
  const SynonymousMapping f({0, 0, 1, 1}, "f");

  const GenerativeDecoder lowest = GenerativeDecoder::lowest_index(f);
  REQUIRE(lowest.representative(0) == 0);
  REQUIRE(lowest.representative(1) == 2);

  const GenerativeDecoder modal = GenerativeDecoder::most_probable(f, p);
  REQUIRE(modal.representative(0) == 0);
  REQUIRE(modal.representative(1) == 2);  // tie inside class 1 goes low

  REQUIRE_THROWS_AS(GenerativeDecoder({0, 1}, f), ValidationError);  // 1 is class 0
  REQUIRE_THROWS_AS(GenerativeDecoder({0}, f), ValidationError);

  SplitMix64 rng(31);
  const auto xs = draw_sequence(p, 4000, rng);
  const auto bytes = semantic_encode(xs, f, p);
  const auto back = generative_decode(bytes, xs.size(), f, lowest, p);
  std::size_t class_errors = 0;
  std::size_t symbol_moves = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    class_errors += f.class_of(back[i]) != f.class_of(xs[i]);
    symbol_moves += back[i] != xs[i];
  }
  REQUIRE(class_errors == 0);
  // Within-class substitution frequency approaches p(1)+p(3) = 0.375.
  REQUIRE(std::fabs(static_cast<double>(symbol_moves) / 4000.0 - 0.375) < 0.03);
}
