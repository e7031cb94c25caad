#include <catch2/catch_amalgamated.hpp>

#include "seminfo/distribution.hpp"
#include "test_support.hpp"

using namespace seminfo;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("entropy of basic laws") {
  REQUIRE(entropy(Distribution::uniform(2)) == Approx(1.0).margin(1e-15));
  REQUIRE(entropy(Distribution::uniform(8)) == Approx(3.0).margin(1e-15));
  REQUIRE(entropy(Distribution({1.0, 0.0}, "point")) == 0.0);
  REQUIRE(entropy(Distribution({0.75, 0.25}, "pair")) ==
          Approx(0.8112781244591328).margin(1e-15));
  REQUIRE(entropy(Distribution({0.5, 0.25, 0.125, 0.125}, "fs")) ==
          Approx(1.75).margin(1e-15));
}

TEST_CASE("pmf validation") {
  REQUIRE_THROWS_AS(Distribution({0.6, 0.3}, "bad"), ValidationError);
  REQUIRE_THROWS_WITH(Distribution({0.6, 0.3}, "bad"), ContainsSubstring("bad"));
  REQUIRE_THROWS_AS(Distribution({1.2, -0.2}, "neg"), ValidationError);
  REQUIRE_THROWS_AS(Distribution(std::vector<double>{}, "empty"), ValidationError);

  // A tiny negative from upstream arithmetic is treated as zero, not rejected.
  Distribution p({1.0 + 1e-13, -1e-13}, "clamped");
  REQUIRE(p[1] == 0.0);

  std::vector<double> huge(4097, 1.0 / 4097.0);
  REQUIRE_THROWS_AS(Distribution(huge, "huge"), ValidationError);
}

TEST_CASE("cumulative table ends at one") {
  Distribution p({0.2, 0.0, 0.5, 0.3}, "p");
  const auto cum = p.cumulative();
  REQUIRE(cum.size() == 4);
  REQUIRE(cum.back() == Approx(1.0).margin(1e-12));
  REQUIRE(cum[1] == Approx(cum[0]).margin(1e-15));
}

TEST_CASE("channel validation and constructors") {
  REQUIRE_THROWS_AS(Channel({{0.5, 0.5}, {0.7, 0.2}}), ValidationError);
  const Channel id = Channel::identity(3);
  REQUIRE(id.at(1, 1) == 1.0);
  REQUIRE(id.at(1, 2) == 0.0);
  const Channel bsc = Channel::binary_symmetric(0.11);
  REQUIRE(bsc.at(0, 1) == Approx(0.11));
  REQUIRE_THROWS_AS(Channel::binary_symmetric(-0.1), ValidationError);
  REQUIRE_THROWS_AS(Channel::binary_symmetric(1.1), ValidationError);
}

TEST_CASE("joint construction and marginals") {
  const Distribution p({0.3, 0.7}, "p");
  const Channel w = testsup::make_bsc(0.1);
  const JointDistribution j = joint_from(p, w);
  REQUIRE(j.marginal_x()[0] == Approx(0.3).margin(1e-12));
  REQUIRE(j.marginal_y()[0] == Approx(0.3 * 0.9 + 0.7 * 0.1).margin(1e-12));
  REQUIRE(j.at(0, 1) == Approx(0.3 * 0.1).margin(1e-15));
}

TEST_CASE("mutual information identities") {
  const Distribution p = Distribution::uniform(2);

  SECTION("independent pair has zero information") {
    const Channel flat({{0.4, 0.6}, {0.4, 0.6}});
    REQUIRE(mutual_information(joint_from(p, flat)) == Approx(0.0).margin(1e-12));
  }

  SECTION("symmetric binary channel at uniform input") {
    for (double eps : {0.05, 0.11, 0.25}) {
      const double expect = 1.0 - testsup::binary_entropy(eps);
      REQUIRE(mutual_information(joint_from(p, testsup::make_bsc(eps))) ==
              Approx(expect).margin(1e-12));
    }
  }

  SECTION("chain rule consistency") {
    SplitMix64 rng(7);
    for (int t = 0; t < 25; ++t) {
      const Distribution px = testsup::random_pmf(rng, 4);
      const Channel w = testsup::random_channel(rng, 4, 3);
      const JointDistribution j = joint_from(px, w);
      const double lhs = mutual_information(j);
      const double rhs = entropy(j.marginal_x()) + entropy(j.marginal_y()) - joint_entropy(j);
      REQUIRE(lhs == Approx(rhs).margin(1e-12));
      REQUIRE(lhs >= -1e-12);
      REQUIRE(conditional_entropy(j) ==
              Approx(joint_entropy(j) - entropy(j.marginal_y())).margin(1e-12));
    }
  }
}

TEST_CASE("joint validation") {
  REQUIRE_THROWS_AS(JointDistribution({0.5, 0.2}, 1, 2), ValidationError);
  const JointDistribution ok({0.25, 0.25, 0.25, 0.25}, 2, 2);
  REQUIRE(ok.n_x() == 2);
  REQUIRE(joint_entropy(ok) == Approx(2.0).margin(1e-12));
}
