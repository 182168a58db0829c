#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "abeltv/metrics.hpp"
#include "abeltv/operators.hpp"
#include "abeltv/phantoms.hpp"

using namespace abeltv;

TEST(Rasterize, EmptySpecIsZero) {
  const GridRZ g(16);
  EXPECT_EQ(rasterize_phantom(PhantomSpec{}, g).values.norm(), 0.0);
}

TEST(Rasterize, RectangleCellsAndPerimeter) {
  const GridRZ g(64);
  const PhantomSpec spec{{{RectRegion{0.0, 0.5, -0.5, 0.5}, 1.0}}};
  const RadialField u = rasterize_phantom(spec, g);
  for (int j = 0; j < g.n_r; ++j)
    for (int k = 0; k < g.n_z; ++k) {
      const bool inside = g.cell_mid(j) < 0.5 && std::abs(g.axial(k)) <= 0.5 + 1e-12;
      EXPECT_EQ(u(j, k), inside ? 1.0 : 0.0);
    }
  // Outer side r = 0.5 (length 1) plus the two caps (0.5 each); the axis
  // side carries no jump.
  EXPECT_NEAR(tv_seminorm(u.values, g.h), 2.0, 4.0 * g.h);
}

TEST(Rasterize, LaterShapesOverwrite) {
  const GridRZ g(32);
  const PhantomSpec spec{{{RectRegion{0.0, 0.5, -0.5, 0.5}, 1.0},
                          {RectRegion{0.25, 0.75, 0.0, 0.5}, 0.4}}};
  const RadialField u = rasterize_phantom(spec, g);
  const int j = radial_cell(g, 0.3), k = 40;  // r~0.3, z=0.25: in both
  EXPECT_EQ(u(j, k), 0.4);
  EXPECT_EQ(u(radial_cell(g, 0.1), k), 1.0);
  EXPECT_EQ(u(radial_cell(g, 0.6), k), 0.4);
}

TEST(Rasterize, RejectsShapesOutsideSupport) {
  const GridRZ g(16);
  EXPECT_THROW(rasterize_phantom({{{RectRegion{0.0, 1.0, -0.5, 0.5}, 1.0}}}, g),
               std::invalid_argument);
  EXPECT_THROW(rasterize_phantom({{{RectRegion{0.0, 0.5, -1.0, 0.5}, 1.0}}}, g),
               std::invalid_argument);
  EXPECT_THROW(rasterize_phantom({{{HalfEllipseRegion{0.0, 0.99, 0.0, 0.5}, 1.0}}}, g),
               std::invalid_argument);
  EXPECT_THROW(rasterize_phantom({{{RectRegion{0.0, 0.5, -0.5, 0.5}, 1.5}}}, g),
               std::invalid_argument);
  EXPECT_THROW(rasterize_phantom({{{HalfEllipseRegion{0.0, 0.0, 0.0, 0.5}, 1.0}}}, g),
               std::invalid_argument);
}

TEST(Rasterize, BuiltinsSatisfyGroundTruthInvariants) {
  for (const char* name : {"nested-annuli", "four-blobs"})
    for (int n : {16, 64, 128}) {
      const GridRZ g(n);
      const RadialField u = rasterize_phantom(builtin_phantom(name), g);
      EXPECT_TRUE(u.all_finite());
      EXPECT_GE(u.values.minCoeff(), 0.0);
      EXPECT_EQ(norm_linf(u.values), 1.0) << name;
      EXPECT_EQ(u.values.row(g.n_r - 1).norm(), 0.0) << name;
      EXPECT_EQ(u.values.col(0).norm(), 0.0) << name;
      EXPECT_EQ(u.values.col(g.n_z - 1).norm(), 0.0) << name;
    }
  EXPECT_THROW(builtin_phantom("cube"), std::invalid_argument);
}

TEST(Rasterize, DisjointShapeOrderDoesNotMatter) {
  const GridRZ g(64);
  PhantomSpec spec = four_blobs_phantom();
  const RadialField forward = rasterize_phantom(spec, g);
  std::reverse(spec.shapes.begin(), spec.shapes.end());
  EXPECT_EQ(rasterize_phantom(spec, g).values, forward.values);
  std::rotate(spec.shapes.begin(), spec.shapes.begin() + 1, spec.shapes.end());
  EXPECT_EQ(rasterize_phantom(spec, g).values, forward.values);
}

class NoiseTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const GridRZ g(128);
    f0 = apply_abel(build_abel_matrix(g), rasterize_phantom(nested_annuli_phantom(), g));
  }
  ProjectionField f0;
};

TEST_F(NoiseTest, ZeroVarianceIsIdentity) {
  EXPECT_EQ(add_noise(f0, {0.0, 9}).values, f0.values);
  EXPECT_THROW(add_noise(f0, {-0.1, 9}), std::invalid_argument);
}

TEST_F(NoiseTest, SampleStatistics) {
  const double frac = 0.0005;
  const double sigma2 = frac * f0.values.cwiseAbs().maxCoeff();
  const Matrix eta = add_noise(f0, {frac, 2024}).values - f0.values;
  const double count = static_cast<double>(eta.size());
  const double mean = eta.mean();
  const double var = (eta.array() - mean).square().sum() / (count - 1);
  EXPECT_NEAR(var, sigma2, 0.05 * sigma2);
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(sigma2) / std::sqrt(count));
  const double l2 = norm_l2_vh(eta, f0.grid.h);
  EXPECT_NEAR(l2, std::sqrt(sigma2) * std::sqrt(2.0), 0.1 * std::sqrt(sigma2) * std::sqrt(2.0));
}

TEST_F(NoiseTest, SeedDeterminism) {
  const auto a = add_noise(f0, {0.0001, 1});
  const auto b = add_noise(f0, {0.0001, 1});
  const auto c = add_noise(f0, {0.0001, 2});
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}
