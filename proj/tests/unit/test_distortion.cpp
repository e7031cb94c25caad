#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "seminfo/distortion.hpp"
#include "seminfo/rng.hpp"
#include "test_support.hpp"

using namespace seminfo;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

// Writes content to a fresh temp file and returns its path.
std::string temp_file(const std::string& stem, const std::string& content) {
  const auto path =
      std::filesystem::temp_directory_path() / ("seminfo_test_" + stem + ".txt");
  std::ofstream out(path);
  out << content;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("class mismatch matrices") {
  const DistortionMatrix d1 = class_mismatch_distortion(1);
  REQUIRE(d1.at(0, 0) == 0.0);
  const DistortionMatrix d3 = class_mismatch_distortion(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      REQUIRE(d3.at(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("distortion matrix validation") {
  REQUIRE_THROWS_AS(DistortionMatrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}),
                    ValidationError);
  REQUIRE_THROWS_AS(DistortionMatrix::from_rows({{0.0, 1.0}, {1.0}}), ValidationError);
  const DistortionMatrix d = DistortionMatrix::from_rows({{0.0, 2.0}, {0.5, 0.0}});
  REQUIRE(d.row_min(0) == 0.0);
  REQUIRE(d.min_positive() == Approx(0.5));
}

TEST_CASE("cosine distortion basics") {
  const FeatureTable t({{1.0, 0.0}, {0.0, 2.0}, {1.0, 0.0}, {1.0, 1.0}});
  const DistortionMatrix d = cosine_distortion(t);
  REQUIRE(d.at(0, 2) == Approx(0.0).margin(1e-15));
  REQUIRE(d.at(0, 1) == Approx(0.5).margin(1e-12));
  REQUIRE(d.at(0, 3) == Approx(0.14644660940672624).margin(1e-12));
  REQUIRE(d.at(3, 0) == Approx(d.at(0, 3)).margin(1e-15));
}

TEST_CASE("cosine distortion properties under random vectors") {
  SplitMix64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.next_u64() % 5;
    const std::size_t k = 1 + rng.next_u64() % 4;
    std::vector<std::vector<double>> vecs(n, std::vector<double>(k));
    for (auto& v : vecs) {
      bool nonzero = false;
      for (double& c : v) {
        c = 2.0 * rng.next_double() - 1.0;
        nonzero = nonzero || c != 0.0;
      }
      if (!nonzero) v[0] = 1.0;
    }
    const DistortionMatrix d = cosine_distortion(FeatureTable(vecs));
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(d.at(i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        REQUIRE(d.at(i, j) >= 0.0);
        REQUIRE(d.at(i, j) <= 1.0);
        REQUIRE(d.at(i, j) == Approx(d.at(j, i)).margin(1e-12));
      }
    }

    // Positive rescaling of any vector leaves the matrix unchanged.
    auto scaled = vecs;
    for (double& c : scaled[0]) c *= 37.5;
    const DistortionMatrix d2 = cosine_distortion(FeatureTable(scaled));
    for (std::size_t j = 0; j < n; ++j)
      REQUIRE(d2.at(0, j) == Approx(d.at(0, j)).margin(1e-12));
  }
}

TEST_CASE("feature table validation") {
  REQUIRE_THROWS_AS(FeatureTable({{1.0, 0.0}, {0.0}}), ValidationError);
  REQUIRE_THROWS_AS(FeatureTable({{1.0}, {0.0}}), ValidationError);  // zero vector
  REQUIRE_THROWS_AS(FeatureTable({}), ValidationError);
}

TEST_CASE("distortion files round trip") {
  const DistortionMatrix d = DistortionMatrix::from_rows({{0.0, 0.25}, {1.5, 0.0}});
  std::ostringstream text;
  save_distortion(d, text);
  const std::string path = temp_file("grid", text.str());
  const DistortionMatrix back = load_distortion(path);
  REQUIRE(back.n_src() == 2);
  REQUIRE(back.at(1, 0) == Approx(1.5));
  std::remove(path.c_str());
}

TEST_CASE("distortion file diagnostics name the offending line") {
  SECTION("ragged") {
    const std::string path = temp_file("ragged", "0 1\n1\n");
    REQUIRE_THROWS_WITH(load_distortion(path), ContainsSubstring(":2"));
    std::remove(path.c_str());
  }
  SECTION("negative cell") {
    const std::string path = temp_file("negative", "0 1\n-1 0\n");
    REQUIRE_THROWS_AS(load_distortion(path), ValidationError);
    std::remove(path.c_str());
  }
  SECTION("junk token") {
    const std::string path = temp_file("junk", "0 1\n1 abc\n");
    REQUIRE_THROWS_WITH(load_distortion(path), ContainsSubstring(":2"));
    std::remove(path.c_str());
  }
  SECTION("comments and commas are fine") {
    const std::string path = temp_file("commas", "# header\n0, 1\n1, 0\n");
    REQUIRE(load_distortion(path).at(0, 1) == 1.0);
    std::remove(path.c_str());
  }
  SECTION("missing file") {
    REQUIRE_THROWS_AS(load_distortion("/nonexistent/seminfo.grid"), IoError);
  }
}

TEST_CASE("feature files demand exact index coverage") {
  SECTION("well formed, any order") {
    const std::string path = temp_file("feat", "1 0 2\n0 1 0\n");
    const FeatureTable t = load_features(path);
    REQUIRE(t.size() == 2);
    REQUIRE(t.at(1)[1] == Approx(2.0));
    std::remove(path.c_str());
  }
  SECTION("duplicate index") {
    const std::string path = temp_file("dup", "0 1 0\n0 0 1\n");
    REQUIRE_THROWS_AS(load_features(path), ValidationError);
    std::remove(path.c_str());
  }
  SECTION("hole in coverage") {
    const std::string path = temp_file("hole", "0 1 0\n2 0 1\n");
    REQUIRE_THROWS_AS(load_features(path), ValidationError);
    std::remove(path.c_str());
  }
}
