#include <gtest/gtest.h>

#include <cmath>

#include "hsr/error.hpp"
#include "hsr/landscape.hpp"
#include "hsr/projection.hpp"
#include "test_support.hpp"

namespace hsr {
namespace {

using test::kPi;

TEST(PairLoss, ReferenceAndAntipode) {
  const Vector3 r{0, 0, 1};
  EXPECT_EQ(pair_loss(LossKind::kQuaternion, r, r), 0.0);
  EXPECT_EQ(pair_loss(LossKind::kCosine, r, r), 0.0);
  EXPECT_EQ(pair_loss(LossKind::kL2, r, r), 0.0);
  EXPECT_DOUBLE_EQ(pair_loss(LossKind::kQuaternion, -r, r), kPi);
  EXPECT_DOUBLE_EQ(pair_loss(LossKind::kCosine, -r, r), 2.0);
  EXPECT_DOUBLE_EQ(pair_loss(LossKind::kL2, -r, r), 2.0);
  EXPECT_NEAR(pair_loss(LossKind::kQuaternion, {1, 0, 0}, r), kPi / 2, 1e-15);
}

TEST(Landscape, CellsFollowThePixelGrid) {
  const UnitVector3 ref = normalize(Vector3{0.3, -0.2, 0.9});
  const ScalarGrid g = generate_landscape(LossKind::kCosine, ref, 64, 32);
  ASSERT_EQ(g.width(), 64);
  ASSERT_EQ(g.height(), 32);
  for (int v = 0; v < 32; v += 3) {
    for (int u = 0; u < 64; u += 5) {
      EXPECT_DOUBLE_EQ(g(u, v), 1.0 - dot(pixel_to_direction(u, v, 64, 32), ref));
    }
  }
}

TEST(Landscape, MinimumAtReferenceMaximumAtAntipode) {
  const UnitVector3 ref(0, 0, 1);
  const ScalarGrid q = generate_landscape(LossKind::kQuaternion, ref);
  const int w = kLandscapeWidth, h = kLandscapeHeight;
  // reference falls between the four centre pixels
  EXPECT_LT(q(w / 2, h / 2), 2 * kPi / h);
  EXPECT_GT(q(0, h / 2), kPi - 2 * kPi / h);
  double lo = 1e9, hi = -1e9;
  for (double x : q.data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, kPi);
}

TEST(Landscape, QuaternionIsArccosOfOneMinusCosine) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 3; ++t) {
    const UnitVector3 ref = normalize(test::random_unit(rng));
    const ScalarGrid q = generate_landscape(LossKind::kQuaternion, ref, 128, 64);
    const ScalarGrid c = generate_landscape(LossKind::kCosine, ref, 128, 64);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(q[i], std::acos(1.0 - c[i]), 1e-6);
  }
}

TEST(Convexity, QuaternionLinearCosineFlatAtTail) {
  const UnitVector3 ref(0, 0, 1);
  const ConvexityReport r = landscape_convexity_report(generate_landscape(LossKind::kQuaternion, ref),
                                                       generate_landscape(LossKind::kCosine, ref), ref);
  EXPECT_GE(r.quat_min_slope_interior, 0.95);
  EXPECT_GE(r.quat_min_slope_tail, 0.95);
  EXPECT_LE(r.cos_max_slope_tail, 0.2);
  EXPECT_GT(r.cos_min_slope_tail, 0.0);
  EXPECT_LT(r.max_identity_error, 1e-6);
  EXPECT_GT(r.interior_segments, 100u);
  EXPECT_GT(r.tail_segments, 5u);
}

TEST(Convexity, SlopesMatchAnalyticDerivatives) {
  // d(theta)/d(theta) = 1 and d(1 - cos theta)/d(theta) = sin theta; near
  // the antipode sin(pi - 0.2) bounds the cosine slope.
  const UnitVector3 ref = normalize(Vector3{0.4, 0.2, -0.8});
  const ConvexityReport r = landscape_convexity_report(generate_landscape(LossKind::kQuaternion, ref),
                                                       generate_landscape(LossKind::kCosine, ref), ref);
  EXPECT_NEAR(r.quat_min_slope_interior, 1.0, 1e-3);
  EXPECT_LE(r.cos_max_slope_tail, std::sin(kTailWidth) + 1e-3);
}

TEST(Convexity, ShapeMismatch) {
  EXPECT_THROW(landscape_convexity_report(ScalarGrid(8, 4), ScalarGrid(16, 8), UnitVector3(0, 0, 1)), Error);
}

TEST(Heatmap, DarkerMeansHigher) {
  ScalarGrid g(4, 1);
  g[0] = 0.0;
  g[1] = 1.0;
  g[2] = 2.0;
  g[3] = 3.0;
  const Grid<std::uint8_t> img = landscape_heatmap(g);
  EXPECT_EQ(img[0], 255);
  EXPECT_EQ(img[3], 0);
  EXPECT_GT(img[1], img[2]);
  EXPECT_GT(img[0], img[1]);
}

}  // namespace
}  // namespace hsr
