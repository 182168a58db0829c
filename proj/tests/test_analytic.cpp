#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "abeltv/analytic.hpp"
#include "abeltv/experiment.hpp"

using namespace abeltv;

namespace {
const double kPi = std::numbers::pi;
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto& rule = quadrature::default_rule();
  double wsum = 0.0;
  for (int i = 0; i < rule.size(); ++i) wsum += rule.weight(i);
  EXPECT_NEAR(wsum, 2.0, 1e-13);
  EXPECT_NEAR(rule.integrate([](double x) { return std::pow(x, 10); }, 0.0, 1.0), 1.0 / 11,
              1e-14);
  EXPECT_NEAR(rule.integrate([](double x) { return std::exp(x); }, -1.0, 2.0),
              std::exp(2.0) - std::exp(-1.0), 1e-13);
}

TEST(JTransform, IndicatorAtOrigin) {
  const auto fam = indicator_family(2.0);
  EXPECT_NEAR(j_transform(fam.profile, 0.0), 2.0 / std::sqrt(kPi) * std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(j_transform(fam.profile, 0.0), 0.7978846, 1e-7);
}

TEST(JTransform, ZeroProfile) {
  for (double x : {0.0, 0.3, 1.0})
    EXPECT_EQ(j_transform([](double) { return 0.0; }, x), 0.0);
}

// int_x^a (r-x)^{-1/2} (a-r)^{-1/2} dr = pi, so J of (a-r)^{-1/2} is sqrt(pi).
TEST(JTransform, GammaIdentity) {
  const double a = 0.5;
  auto v = [a](double r) { return r < a ? 1.0 / std::sqrt(a - r) : 0.0; };
  for (double x : {0.0, 0.1, 0.3, 0.49})
    EXPECT_NEAR(j_transform(v, x, {a}), std::sqrt(kPi), 1e-9) << "x=" << x;
}

TEST(JTransform, RejectsOutsideUnitInterval) {
  const auto fam = indicator_family(1.0);
  EXPECT_THROW(j_transform(fam.profile, -0.1), std::invalid_argument);
  EXPECT_THROW(j_transform(fam.profile, 1.5), std::invalid_argument);
}

// Quadrature route against the closed form of step profiles.
TEST(JTransform, QuadratureMatchesClosedFormOnSteps) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const auto v = random_step_profile(rng);
    for (double x : {0.0, 0.13, 0.4, 0.77, 0.96})
      EXPECT_NEAR(j_transform(v, x), v.j_closed_form(x), 1e-9);
  }
}

TEST(JTransform, SmoothProfileAccuracy) {
  // J of (1-r) is (1/sqrt(pi)) * (4/3) (1-x)^{3/2}.
  auto v = [](double r) { return r < 1.0 ? 1.0 - r : 0.0; };
  for (double x : {0.0, 0.2, 0.9})
    EXPECT_NEAR(j_transform(v, x), 4.0 / 3.0 * std::pow(1.0 - x, 1.5) / std::sqrt(kPi), 1e-9);
}

TEST(AbelTransform, UnitDisc) {
  auto u = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
  for (double x : {0.0, 0.25, 0.6, 0.99})
    EXPECT_NEAR(abel_transform(u, x), 2.0 * std::sqrt(1.0 - x * x), 1e-9);
  EXPECT_EQ(abel_transform([](double) { return 0.0; }, 0.4), 0.0);
  EXPECT_THROW(abel_transform(u, 1.2), std::invalid_argument);
}

TEST(AbelTransform, MatchesJTransformUnderSquaredRadius) {
  auto u = [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 2) * (1.0 + r) : 0.0; };
  auto v = [&](double s) { return u(std::sqrt(s)); };
  for (double x : {0.0, 0.3, 0.7})
    EXPECT_NEAR(abel_transform(u, x), std::sqrt(kPi) * j_transform(v, x * x), 1e-8);
}

TEST(IndicatorFamily, NormTable) {
  const auto one = indicator_family(1.0);
  EXPECT_EQ(one.norms.l1_v, 1.0);
  EXPECT_NEAR(one.norms.l2_g, 0.7978846, 1e-7);
  EXPECT_EQ(one.norms.tv_v, 1.0);
  EXPECT_EQ(indicator_family(4.0).norms.l2_v, 0.5);
  EXPECT_THROW(indicator_family(0.5), std::invalid_argument);
  // closed-form g agrees with the transform
  const auto fam = indicator_family(3.0);
  for (double x : {0.0, 0.1, 0.3, 0.5})
    EXPECT_NEAR(fam.g(x), j_transform(fam.profile, x), 1e-10);
}

TEST(IndicatorFamily, QuadratureNormsMatchClosedForms) {
  for (double k : {1.0, 2.0, 4.0, 8.0}) {
    const auto fam = indicator_family(k);
    const auto nq = indicator_norms_by_quadrature(k);
    EXPECT_NEAR(nq.l1_g, fam.norms.l1_g, 1e-7) << "k=" << k;
    EXPECT_NEAR(nq.l2_g, fam.norms.l2_g, 1e-7) << "k=" << k;
    EXPECT_NEAR(fam.profile.norm_l1(), fam.norms.l1_v, 1e-15);
    EXPECT_NEAR(fam.profile.norm_l2(), fam.norms.l2_v, 1e-15);
    EXPECT_EQ(fam.profile.total_variation(), 1.0);
  }
}

TEST(IndicatorFamily, DecayRatesAndSumBoundWitness) {
  const std::vector<double> ks{1, 2, 4, 8, 16};
  std::vector<double> v2, g1;
  for (double k : ks) {
    v2.push_back(indicator_family(k).profile.norm_l2());
    g1.push_back(indicator_norms_by_quadrature(k).l1_g);
  }
  EXPECT_NEAR(loglog_slope(ks, v2), -0.5, 0.02);
  EXPECT_NEAR(loglog_slope(ks, g1), -1.5, 0.02);
  EXPECT_LT(indicator_norms_by_quadrature(16).l2_g, 0.1);
  EXPECT_EQ(indicator_family(16).norms.tv_v, 1.0);
}

TEST(Stieltjes, SingleJump) {
  const PiecewiseConstantProfile g({0.0, 0.5}, {std::sqrt(kPi)});
  for (double r : {0.0, 0.2, 0.45})
    EXPECT_NEAR(stieltjes_inverse(g, r), 1.0 / std::sqrt(0.5 - r), 1e-12);
  EXPECT_EQ(stieltjes_inverse(g, 0.5), 0.0);
  EXPECT_EQ(stieltjes_inverse(g, 0.8), 0.0);
}

TEST(Stieltjes, ZeroData) {
  const PiecewiseConstantProfile g({0.0, 0.6}, {0.0});
  EXPECT_EQ(stieltjes_inverse(g, 0.1), 0.0);
  EXPECT_EQ(stieltjes_inverse(PiecewiseConstantProfile(), 0.3), 0.0);
}

TEST(Stieltjes, RejectsNegativeInitialValue) {
  const PiecewiseConstantProfile g({0.0, 0.6}, {-1.0});
  EXPECT_THROW(stieltjes_inverse(g, 0.1), std::invalid_argument);
}

TEST(Stieltjes, RoundTripThroughJ) {
  const PiecewiseConstantProfile g({0.0, 0.3, 0.55, 0.8}, {1.0, 0.4, 0.7});
  const StieltjesSolution v(g);
  for (double x : {0.0, 0.2, 0.4})
    EXPECT_NEAR(j_transform(v, x, v.singular_points()), g(x), 1e-7) << "x=" << x;
}

TEST(RunningAverage, Examples) {
  EXPECT_NEAR(running_average([](double) { return 3.0; }, 0.3, 0.7), 3.0, 1e-12);
  EXPECT_NEAR(running_average([](double y) { return y; }, 0.2, 0.5), 0.4, 1e-12);
  EXPECT_THROW(running_average([](double y) { return y; }, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(running_average([](double y) { return y; }, 0.6, 0.7), std::invalid_argument);
  EXPECT_THROW(running_average([](double y) { return y; }, 0.2, 0.1), std::invalid_argument);
}

TEST(RunningAverage, SupNormDoesNotGrow) {
  auto v = [](double y) { return std::sin(9.0 * y) * std::exp(-y); };
  double vmax = 0.0, avg_max = 0.0;
  for (int i = 0; i <= 2000; ++i) vmax = std::max(vmax, std::abs(v(i / 2000.0)));
  const double h = 0.1;
  for (int i = 0; i < 50; ++i) {
    const double x = h + (1.0 - h) * i / 49.0;
    avg_max = std::max(avg_max, std::abs(running_average(v, h, x)));
  }
  EXPECT_LE(avg_max, vmax);
}

TEST(BoundConstants, ClosedForms) {
  const auto bc = bound_constants();
  EXPECT_NEAR(bc.c_l2_2d, 2.3759, 5e-4);
  EXPECT_NEAR(bc.c_l1_2d, 4.0175, 5e-4);
  EXPECT_NEAR(bc.young_l2, 0.7978846, 1e-7);
  EXPECT_NEAR(bc.young_l1, 4.0 / (3.0 * std::sqrt(kPi)), 1e-15);
  EXPECT_NEAR(BoundConstants::kernel_k1_l1(0.25), 1.0, 1e-15);
  EXPECT_NEAR(BoundConstants::kernel_k2_l1(0.25), 2.0 - std::sqrt(2.0), 1e-15);
}

TEST(Profile, JumpsAndTotalVariation) {
  const PiecewiseConstantProfile v({0.0, 0.2, 0.5}, {0.3, 0.9});
  const auto jumps = v.jumps();
  ASSERT_EQ(jumps.size(), 2u);
  EXPECT_NEAR(jumps[0].size, 0.6, 1e-15);
  EXPECT_NEAR(jumps[1].size, -0.9, 1e-15);
  EXPECT_NEAR(v.total_variation(), 1.5, 1e-15);
  EXPECT_EQ(v(0.1), 0.3);
  EXPECT_EQ(v(0.2), 0.9);
  EXPECT_EQ(v(0.5), 0.0);
  EXPECT_THROW(PiecewiseConstantProfile({0.1, 0.2}, {1.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseConstantProfile({0.0, 0.2}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(PiecewiseConstantProfile({0.0, 0.4, 0.3}, {1.0, 2.0}), std::invalid_argument);
}

// Property suites over random step profiles.
TEST(StabilityBounds, RandomStepProfiles) {
  const auto bc = bound_constants();
  std::mt19937_64 rng(123456);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_step_profile(rng);
    const double tv = v.total_variation();
    const double jl1 = j_norm_l1(v), jl2 = j_norm_l2(v);
    EXPECT_LE(v.norm_l2(), bc.c_l2_2d * std::sqrt(tv) * std::sqrt(jl2));
    EXPECT_LE(v.norm_l1(), bc.c_l1_2d * std::cbrt(tv) * std::pow(jl1, 2.0 / 3.0));
    EXPECT_LE(jl2, bc.young_l2 * tv);
    EXPECT_LE(jl1, bc.young_l1 * tv);
  }
}

TEST(JSquared, EqualsIntegration) {
  auto v = [](double r) { return r < 1.0 ? std::cos(r) * (1.0 - r) * (1.0 - r) : 0.0; };
  for (double x : {0.0, 0.25, 0.5}) {
    const double twice = j_transform([&](double s) { return j_transform(v, s); }, x);
    const double direct = integrate_pieces(v, x, 1.0);
    EXPECT_NEAR(twice, direct, 1e-6);
  }
}
