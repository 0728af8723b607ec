#include <gtest/gtest.h>

#include <cmath>

#include "hsr/error.hpp"
#include "hsr/losses.hpp"
#include "hsr/synthetic.hpp"
#include "test_support.hpp"

namespace hsr {
namespace {

using test::kDeg;

constexpr double kTenDegrees = 0.17453292519943295;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hsr::Error thrown";
  return ErrorCode::kInvalidArgument;
}

// Independent central differences of cfg's objective, scaled back to the
// summed-loss convention of LossReport::gradient.
double numeric_component(const NormalField& pred, const NormalField& gt, const LossConfig& cfg, int u, int v,
                         int c, double h) {
  NormalField p = pred, m = pred;
  p.normals()(u, v)[c] += h;
  m.normals()(u, v)[c] -= h;
  const LossReport base = objective(pred, gt, cfg);
  return (objective(p, gt, cfg).objective - objective(m, gt, cfg).objective) / (2 * h) / base.objective_scale();
}

TEST(QuaternionLoss, Identity) {
  const NormalField f = test::random_field(8, 4, 1);
  const LossReport r = quaternion_loss(f, f);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.degenerate_count, f.size());
}

TEST(QuaternionLoss, ConstantTenDegreeOffset) {
  const NormalField gt = test::random_field(16, 8, 2);
  EXPECT_NEAR(quaternion_loss(test::tilt_field(gt, 10 * kDeg), gt).objective, kTenDegrees, 1e-12);
  EXPECT_NEAR(kTenDegrees, 0.174533, 5e-7);
}

TEST(QuaternionLoss, MaskedMeanUsesValidPixelsOnly) {
  const NormalField gt = test::random_field(16, 8, 3);
  NormalField pred = test::tilt_field(gt, 10 * kDeg);
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      pred.normals()(u, v) = -gt.normal(u, v);  // would add pi if counted
      pred.invalidate(u, v);
    }
  }
  const LossReport r = quaternion_loss(pred, gt);
  EXPECT_EQ(r.valid_count, 64u);
  EXPECT_NEAR(r.objective, kTenDegrees, 1e-12);
  EXPECT_EQ(r.per_pixel(0, 0), 0.0);
  EXPECT_EQ(r.gradient(0, 0), (Vector3{}));
}

TEST(CosineLoss, Examples) {
  const NormalField x = test::constant_field(4, 2, {1, 0, 0});
  const NormalField y = test::constant_field(4, 2, {0, 1, 0});
  const NormalField mx = test::constant_field(4, 2, {-1, 0, 0});
  EXPECT_EQ(cosine_loss(x, x).objective, 0.0);
  EXPECT_DOUBLE_EQ(cosine_loss(x, y).objective, 1.0);
  EXPECT_DOUBLE_EQ(cosine_loss(x, mx).objective, 2.0);
}

TEST(L2Loss, Examples) {
  const NormalField x = test::constant_field(4, 2, {1, 0, 0});
  const NormalField y = test::constant_field(4, 2, {0, 1, 0});
  const NormalField mx = test::constant_field(4, 2, {-1, 0, 0});
  EXPECT_EQ(l2_loss(x, x).objective, 0.0);
  EXPECT_DOUBLE_EQ(l2_loss(x, y).objective, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(l2_loss(x, mx).objective, 2.0);
}

TEST(DataLoss, ShapeMismatch) {
  EXPECT_EQ(code_of([] { quaternion_loss(NormalField(4, 2), NormalField(2, 4)); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([] { cosine_loss(NormalField(4, 2), NormalField(4, 3)); }), ErrorCode::kShapeMismatch);
}

TEST(DataLoss, GradientsMatchFiniteDifferences) {
  const FieldPair f = make_random_pair(6, 4, 21);
  for (LossKind kind : {LossKind::kQuaternion, LossKind::kCosine, LossKind::kL2}) {
    LossConfig cfg;
    cfg.kind = kind;
    cfg.alpha = 0.0;
    const LossReport r = objective(f.pred, f.gt, cfg);
    for (int v = 0; v < 4; ++v) {
      for (int u = 0; u < 6; ++u) {
        for (int c = 0; c < 3; ++c) {
          const double num = numeric_component(f.pred, f.gt, cfg, u, v, c, 1e-6);
          EXPECT_NEAR(r.gradient(u, v)[c], num, 1e-7) << to_string(kind) << " " << u << "," << v << "," << c;
        }
      }
    }
  }
}

TEST(Smoothness, ConstantFieldIsZero) {
  const LossReport r = smoothness(test::constant_field(8, 4, {0.2, 0.3, 0.9}));
  EXPECT_EQ(r.objective, 0.0);
  for (double x : r.per_pixel.data()) EXPECT_EQ(x, 0.0);
}

TEST(Smoothness, VerticalSeamIsSqrtTwoOnSeamColumn) {
  NormalField f(8, 4, UnitVector3(1, 0, 0));
  for (int v = 0; v < 4; ++v) {
    for (int u = 4; u < 8; ++u) f.set(u, v, UnitVector3(0, 1, 0));
  }
  const LossReport r = smoothness(f);
  for (int v = 0; v < 4; ++v) {
    for (int u = 0; u < 8; ++u) {
      if (u == 3) {
        EXPECT_DOUBLE_EQ(r.per_pixel(u, v), std::sqrt(2.0));
      } else {
        EXPECT_EQ(r.per_pixel(u, v), 0.0) << u << "," << v;
      }
    }
  }
  EXPECT_DOUBLE_EQ(r.objective, 4 * std::sqrt(2.0) / 32);
}

TEST(Smoothness, TooSmallPerAxis) {
  const NormalField row(2, 1);  // one row, two columns
  EXPECT_EQ(code_of([&] { forward_differences(row, Axis::kVertical); }), ErrorCode::kTooSmall);
  EXPECT_NO_THROW(forward_differences(row, Axis::kHorizontal));
  EXPECT_EQ(code_of([&] { smoothness(row); }), ErrorCode::kTooSmall);
  EXPECT_EQ(code_of([&] { forward_differences(NormalField(1, 2), Axis::kHorizontal); }), ErrorCode::kTooSmall);
}

TEST(Smoothness, MaskedNeighboursContributeNothing) {
  NormalField f(4, 4, UnitVector3(1, 0, 0));
  f.set(2, 1, UnitVector3(0, 1, 0));
  f.invalidate(2, 1);
  const LossReport r = smoothness(f);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_EQ(r.valid_count, 15u);
  const Grid<Vector3> dx = forward_differences(f, Axis::kHorizontal);
  EXPECT_EQ(dx(1, 1), (Vector3{}));
  EXPECT_EQ(dx(3, 1), (Vector3{}));  // last column has no right neighbour
}

TEST(Smoothness, GradientMatchesFiniteDifferences) {
  const FieldPair f = make_random_pair(5, 4, 23);
  const LossReport r = smoothness(f.pred);
  for (int v = 0; v < 4; ++v) {
    for (int u = 0; u < 5; ++u) {
      for (int c = 0; c < 3; ++c) {
        NormalField p = f.pred, m = f.pred;
        p.normals()(u, v)[c] += 1e-6;
        m.normals()(u, v)[c] -= 1e-6;
        const double num =
            (smoothness(p).objective - smoothness(m).objective) / 2e-6 / r.objective_scale();
        EXPECT_NEAR(r.gradient(u, v)[c], num, 1e-7);
      }
    }
  }
}

TEST(Objective, TenDegreesWithDefaultAlpha) {
  const NormalField gt = test::constant_field(16, 8, {0.1, 0.2, 0.95});
  const NormalField pred = test::tilt_field(gt, 10 * kDeg);
  LossConfig cfg;
  EXPECT_EQ(cfg.alpha, 0.025);
  const double obj = objective(pred, gt, cfg).objective;
  EXPECT_NEAR(obj, 0.975 * kTenDegrees, 1e-12);
  EXPECT_NEAR(obj, 0.170170, 5e-7);
}

TEST(Objective, AlphaZeroIsDataLossExactly) {
  const FieldPair f = make_random_pair(16, 8, 5);
  LossConfig cfg;
  cfg.alpha = 0.0;
  const LossReport a = objective(f.pred, f.gt, cfg);
  const LossReport b = quaternion_loss(f.pred, f.gt);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.gradient, b.gradient);
}

TEST(Objective, ZeroAtConstantGroundTruth) {
  const NormalField gt = test::constant_field(8, 4, {0, 1, 1});
  for (double alpha : {0.0, 0.025, 0.5, 0.99}) {
    LossConfig cfg;
    cfg.alpha = alpha;
    EXPECT_EQ(objective(gt, gt, cfg).objective, 0.0);
  }
}

TEST(Objective, CombinedGradientMatchesFiniteDifferences) {
  const FieldPair f = make_random_pair(6, 4, 29);
  LossConfig cfg;
  const LossReport r = objective(f.pred, f.gt, cfg);
  for (int v = 0; v < 4; ++v) {
    for (int u = 0; u < 6; ++u) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_NEAR(r.gradient(u, v)[c], numeric_component(f.pred, f.gt, cfg, u, v, c, 1e-6), 1e-7);
      }
    }
  }
}

TEST(Objective, RejectsAlphaOutsideUnitInterval) {
  const NormalField f(4, 2);
  for (double alpha : {-0.1, 1.0, 1.5}) {
    LossConfig cfg;
    cfg.alpha = alpha;
    EXPECT_EQ(code_of([&] { objective(f, f, cfg); }), ErrorCode::kInvalidArgument);
  }
}

TEST(GradientCheckHarness, RandomFieldsMeetTolerances) {
  const FieldPair f = make_random_pair(16, 8, 1337);
  auto check = [&](LossKind kind, double alpha) {
    LossConfig cfg;
    cfg.kind = kind;
    cfg.alpha = alpha;
    return finite_difference_check(f.pred, f.gt, cfg, 1e-6);
  };
  const GradientCheck q = check(LossKind::kQuaternion, 0.0);
  EXPECT_EQ(q.samples, 300u);
  EXPECT_LT(q.max_relative_error, 1e-4);
  EXPECT_LT(check(LossKind::kCosine, 0.0).max_relative_error, 1e-6);
  EXPECT_LT(check(LossKind::kL2, 0.0).max_relative_error, 1e-4);
  EXPECT_LT(check(LossKind::kQuaternion, 0.025).max_relative_error, 1e-4);
}

TEST(GradientCheckHarness, SmallFieldSamplesEveryComponent) {
  const FieldPair f = make_random_pair(4, 2, 3, 0);
  LossConfig cfg;
  cfg.alpha = 0.0;
  const GradientCheck ok = finite_difference_check(f.pred, f.gt, cfg, 1e-6, 1, 24);
  EXPECT_EQ(ok.samples, 24u);
  EXPECT_LT(ok.max_relative_error, 1e-6);
}

TEST(GradientCheckHarness, RejectsBadStep) {
  const FieldPair f = make_random_pair(4, 2, 3);
  EXPECT_EQ(code_of([&] { finite_difference_check(f.pred, f.gt, LossConfig{}, 1e-2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { finite_difference_check(f.pred, f.gt, LossConfig{}, 1e-9); }), ErrorCode::kInvalidArgument);
}

TEST(LossKindNames, RoundTrip) {
  for (LossKind k : {LossKind::kQuaternion, LossKind::kCosine, LossKind::kL2}) {
    EXPECT_EQ(parse_loss_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_loss_kind("quaternion"), LossKind::kQuaternion);
  EXPECT_EQ(parse_loss_kind("cosine"), LossKind::kCosine);
  EXPECT_EQ(code_of([] { parse_loss_kind("huber"); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace hsr
