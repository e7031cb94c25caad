#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "seminfo/prior.hpp"
#include "test_support.hpp"

using namespace seminfo;
using Catch::Approx;

namespace {

const SolverConfig kTight{1e-10, 50000, 16, 0, 1e-2};

SideInfoModel two_state() {
  return SideInfoModel(Distribution({0.5, 0.5}, "pk"),
                       {Distribution({0.9, 0.1}, "row0"), Distribution({0.2, 0.8}, "row1")},
                       SynonymousMapping::identity(2));
}

}  // namespace

TEST_CASE("side info model validation") {
  REQUIRE_THROWS_AS(SideInfoModel(Distribution({0.5, 0.5}, "pk"),
                                  {Distribution({1.0}, "row0")},
                                  SynonymousMapping::identity(1)),
                    ValidationError);
  REQUIRE_THROWS_AS(SideInfoModel(Distribution({1.0}, "pk"),
                                  {Distribution({0.5, 0.5}, "row0")},
                                  SynonymousMapping::identity(3)),
                    ValidationError);
  const SideInfoModel m = two_state();
  REQUIRE(m.marginal_x()[0] == Approx(0.55).margin(1e-12));
}

TEST_CASE("conditional entropy of hand models") {
  const SideInfoModel m = two_state();
  const double expect =
      0.5 * testsup::binary_entropy(0.1) + 0.5 * testsup::binary_entropy(0.2);
  REQUIRE(conditional_entropy_given_prior(m) == Approx(expect).margin(1e-12));
  REQUIRE(conditional_entropy_given_prior(m) ==
          Approx(0.5954618442383217).margin(1e-12));

  const SideInfoModel det(Distribution({0.3, 0.7}, "pk"),
                          {Distribution({1.0, 0.0}, "r0"), Distribution({0.0, 1.0}, "r1")},
                          SynonymousMapping::identity(2));
  REQUIRE(conditional_entropy_given_prior(det) == 0.0);
  REQUIRE(prior_gain(det) == Approx(entropy(det.marginal_x())).margin(1e-12));

  const SideInfoModel ind(Distribution({0.4, 0.6}, "pk"),
                          {Distribution({0.75, 0.25}, "r"), Distribution({0.75, 0.25}, "r")},
                          SynonymousMapping::identity(2));
  REQUIRE(prior_gain(ind) == Approx(0.0).margin(1e-12));
}

TEST_CASE("knowing the prior is worth its mutual information") {
  const SideInfoModel m = two_state();
  REQUIRE(entropy(m.marginal_x()) == Approx(0.9927744539878083).margin(1e-12));
  REQUIRE(prior_gain(m) == Approx(0.39731260974948657).margin(1e-12));
}

TEST_CASE("single prior state collapses to the unconditional curve exactly") {
  const SideInfoModel m(Distribution({1.0}, "pk"),
                        {Distribution({0.5, 0.25, 0.25}, "row")},
                        SynonymousMapping({0, 0, 1}, "map"));
  const DistortionMatrix ds = class_mismatch_distortion(2);
  SweepSpec sweep;
  sweep.steps = 12;
  const RDCurve cond = conditional_rd_curve(m, ds, sweep, kTight);
  const RDCurve flat = semantic_rd_curve(Distribution({0.5, 0.25, 0.25}, "p"),
                                         SynonymousMapping({0, 0, 1}, "map"), ds, sweep,
                                         kTight);
  REQUIRE(cond.points.size() == flat.points.size());
  for (std::size_t i = 0; i < cond.points.size(); ++i) {
    REQUIRE(cond.points[i].rate == flat.points[i].rate);
    REQUIRE(cond.points[i].distortion == flat.points[i].distortion);
  }
}

TEST_CASE("independent side information adds nothing") {
  const Distribution row({0.5, 0.25, 0.25}, "row");
  const SideInfoModel m(Distribution({0.5, 0.5}, "pk"), {row, row},
                        SynonymousMapping({0, 0, 1}, "map"));
  const DistortionMatrix ds = class_mismatch_distortion(2);
  SweepSpec sweep;
  sweep.steps = 12;
  const RDCurve cond = conditional_rd_curve(m, ds, sweep, kTight);
  const RDCurve flat = semantic_rd_curve(row, SynonymousMapping({0, 0, 1}, "map"), ds,
                                         sweep, kTight);
  for (std::size_t i = 0; i < cond.points.size(); ++i) {
    REQUIRE(cond.points[i].rate == Approx(flat.points[i].rate).margin(1e-6));
    REQUIRE(cond.points[i].distortion ==
            Approx(flat.points[i].distortion).margin(1e-6));
  }
}

TEST_CASE("a perfect prior drives the rate to zero") {
  const SideInfoModel det(Distribution({0.3, 0.7}, "pk"),
                          {Distribution({1.0, 0.0}, "r0"), Distribution({0.0, 1.0}, "r1")},
                          SynonymousMapping::identity(2));
  const DistortionMatrix ds = class_mismatch_distortion(2);
  SweepSpec sweep;
  sweep.steps = 8;
  const RDCurve curve = conditional_rd_curve(det, ds, sweep, kTight);
  for (const auto& pt : curve.points) REQUIRE(pt.rate <= 1e-9);
}

TEST_CASE("conditional solver matches the lifted exhaustive grid") {
  const SideInfoModel m = two_state();
  const DistortionMatrix ds = class_mismatch_distortion(2);
  for (double target : {0.05, 0.1, 0.2}) {
    const double oracle = brute_force_conditional_rd(m, ds, target, 1e-2);
    // Achieved distortion is nonincreasing in the multiplier; bisect onto the
    // oracle's budget, then compare rates.
    double lo = 0.0, hi = 1.0;
    RDPoint pt = conditional_rd_point(m, ds, hi, kTight);
    while (pt.distortion > target && hi < 1e6) {
      hi *= 2.0;
      pt = conditional_rd_point(m, ds, hi, kTight);
    }
    for (int it = 0; it < 80 && std::fabs(pt.distortion - target) > 1e-9; ++it) {
      const double mid = 0.5 * (lo + hi);
      const RDPoint at_mid = conditional_rd_point(m, ds, mid, kTight);
      if (at_mid.distortion > target) {
        lo = mid;
      } else {
        hi = mid;
        pt = at_mid;
      }
    }
    REQUIRE(pt.distortion == Approx(target).margin(1e-6));
    REQUIRE(pt.rate == Approx(oracle).margin(5e-3));
  }
}

TEST_CASE("estimator reproduces the plug-in formula") {
  SECTION("point mass, no smoothing") {
    SampleSet s;
    s.pairs.assign(12, {1, 3});
    s.n_k = 2;
    s.n_x = 4;
    REQUIRE(estimate_conditional_entropy(s, 0.0) == 0.0);
  }

  SECTION("hand dataset, add-one smoothing") {
    // Ten samples: state 0 sees symbols {0,0,1,0,0}, state 1 sees {1,1,0,1,1}.
    SampleSet s;
    s.pairs = {{0, 0}, {0, 0}, {0, 1}, {0, 0}, {1, 1},
               {1, 1}, {1, 0}, {1, 1}, {0, 0}, {1, 1}};
    s.n_k = 2;
    s.n_x = 2;
    auto h2 = [](double a, double b) {
      const double t = a + b;
      return -(a / t) * std::log2(a / t) - (b / t) * std::log2(b / t);
    };
    const double expect = 0.5 * h2(5.0, 2.0) + 0.5 * h2(2.0, 5.0);
    REQUIRE(estimate_conditional_entropy(s, 1.0) == Approx(expect).margin(1e-12));
    const double raw = 0.5 * h2(4.0, 1.0) + 0.5 * h2(1.0, 4.0);
    REQUIRE(estimate_conditional_entropy(s, 0.0) == Approx(raw).margin(1e-12));
  }

  SECTION("bad inputs") {
    SampleSet empty{{}, 2, 2};
    REQUIRE_THROWS_AS(estimate_conditional_entropy(empty, 1.0), ValidationError);
    SampleSet oob{{{2, 0}}, 2, 2};
    REQUIRE_THROWS_AS(estimate_conditional_entropy(oob, 1.0), ValidationError);
    SampleSet ok{{{0, 0}}, 1, 1};
    REQUIRE_THROWS_AS(estimate_conditional_entropy(ok, -1.0), ValidationError);
  }
}

TEST_CASE("seeded draws are reproducible and law-abiding") {
  const SideInfoModel m = two_state();
  SplitMix64 a(99), b(99);
  const SampleSet s1 = draw_samples(m, 500, a);
  const SampleSet s2 = draw_samples(m, 500, b);
  REQUIRE(s1.pairs == s2.pairs);
  std::size_t k0 = 0;
  for (const auto& [k, x] : s1.pairs) k0 += k == 0;
  REQUIRE(std::fabs(static_cast<double>(k0) / 500.0 - 0.5) < 0.08);
}

TEST_CASE("estimates tighten toward the exact conditional entropy") {
  const SideInfoModel m = two_state();
  const ScalingTrendReport r = scaling_trend_report(m, {10, 100, 10000}, 42, 1.0);
  REQUIRE(r.series.size() == 3);
  REQUIRE(r.true_value == Approx(0.5954618442383217).margin(1e-12));
  REQUIRE(std::fabs(r.series.back().estimate - r.true_value) < 0.05);

  const ScalingTrendReport again = scaling_trend_report(m, {10, 100, 10000}, 42, 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    REQUIRE(again.series[i].estimate == r.series[i].estimate);

  REQUIRE_THROWS_AS(scaling_trend_report(m, {}, 1, 1.0), ValidationError);
  REQUIRE_THROWS_AS(scaling_trend_report(m, {0, 5}, 1, 1.0), ValidationError);
}
