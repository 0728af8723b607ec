#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsr/error.hpp"
#include "hsr/geometry.hpp"
#include "test_support.hpp"

namespace hsr {
namespace {

using test::kPi;

void expect_vec_near(const Vector3& a, const Vector3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

void expect_quat_eq(const Quaternion& a, const Quaternion& b, double tol = 1e-15) {
  EXPECT_NEAR(a.w, b.w, tol);
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hsr::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(Normalize, ScalesAxis) { expect_vec_near(normalize({3, 0, 0}), {1, 0, 0}, 0); }

TEST(Normalize, Diagonal) {
  const double s = 1.0 / std::sqrt(3.0);
  expect_vec_near(normalize({1, 1, 1}), {s, s, s}, 1e-15);
}

TEST(Normalize, ZeroVectorThrows) {
  EXPECT_EQ(code_of([] { normalize({0, 0, 0}); }), ErrorCode::kZeroVector);
  EXPECT_EQ(code_of([] { normalize({1e-13, 0, 0}); }), ErrorCode::kZeroVector);
}

TEST(UnitVector, RejectsNonUnitComponents) {
  EXPECT_EQ(code_of([] { UnitVector3(1.0, 1.0, 0.0); }), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(UnitVector3(0.0, 1.0, 0.0));
}

TEST(PureQuaternion, Definition) {
  expect_quat_eq(pure_quaternion(UnitVector3(1, 0, 0)), {0, 1, 0, 0});
  expect_quat_eq(pure_quaternion(UnitVector3(0, 1, 0)), {0, 0, 1, 0});
  expect_quat_eq(pure_quaternion(UnitVector3(0, 0, -1)), {0, 0, 0, -1});
}

TEST(QuatMultiply, IdentityAndBasisRules) {
  const Quaternion q{0.5, -0.1, 0.7, 0.2};
  expect_quat_eq(quat_multiply({1, 0, 0, 0}, q), q);
  expect_quat_eq(quat_multiply(q, {1, 0, 0, 0}), q);
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  expect_quat_eq(quat_multiply(i, j), k);
  expect_quat_eq(quat_multiply(j, k), i);
  expect_quat_eq(quat_multiply(k, i), j);
  expect_quat_eq(quat_multiply(j, i), {0, 0, 0, -1});
  expect_quat_eq(quat_multiply(i, i), {-1, 0, 0, 0});
  expect_quat_eq(quat_multiply(quat_multiply(i, j), k), {-1, 0, 0, 0});
}

TEST(QuatMultiply, TimesConjugateIsIdentity) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    Quaternion q{g(rng), g(rng), g(rng), g(rng)};
    const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    q = {q.w / n, q.x / n, q.y / n, q.z / n};
    expect_quat_eq(quat_multiply(q, conjugate(q)), {1, 0, 0, 0}, 1e-15);
  }
}

TEST(QuatMultiply, Associative) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  auto r = [&] { return Quaternion{g(rng), g(rng), g(rng), g(rng)}; };
  for (int t = 0; t < 50; ++t) {
    const Quaternion a = r(), b = r(), c = r();
    expect_quat_eq(quat_multiply(quat_multiply(a, b), c), quat_multiply(a, quat_multiply(b, c)), 1e-12);
  }
}

TEST(TransitionQuaternion, Examples) {
  const Quaternion x{0, 1, 0, 0}, y{0, 0, 1, 0}, mx{0, -1, 0, 0};
  const Quaternion same = transition_quaternion(x, x);
  EXPECT_DOUBLE_EQ(same.w, 1.0);
  EXPECT_EQ(norm(same.imaginary()), 0.0);
  const Quaternion ortho = transition_quaternion(x, y);
  EXPECT_DOUBLE_EQ(ortho.w, 0.0);
  EXPECT_DOUBLE_EQ(norm(ortho.imaginary()), 1.0);
  const Quaternion anti = transition_quaternion(x, mx);
  EXPECT_DOUBLE_EQ(anti.w, -1.0);
  EXPECT_EQ(norm(anti.imaginary()), 0.0);
}

TEST(TransitionQuaternion, RealPartIsDotImaginaryIsSine) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const UnitVector3 a = normalize(test::random_unit(rng));
    const UnitVector3 b = normalize(test::random_unit(rng));
    const Quaternion q = transition_quaternion(pure_quaternion(a), pure_quaternion(b));
    EXPECT_NEAR(q.w, dot(a, b), 1e-15);
    EXPECT_NEAR(norm(q.imaginary()), norm(cross(a, b)), 1e-15);
    // q is a unit quaternion for unit inputs
    EXPECT_NEAR(q.w * q.w + dot(q.imaginary(), q.imaginary()), 1.0, 1e-14);
  }
}

TEST(TransitionQuaternion, RejectsNonPure) {
  EXPECT_EQ(code_of([] { transition_quaternion({0.5, 1, 0, 0}, {0, 1, 0, 0}); }), ErrorCode::kNotPure);
  EXPECT_EQ(code_of([] { transition_quaternion({0, 1, 0, 0}, {1e-6, 0, 1, 0}); }), ErrorCode::kNotPure);
}

TEST(AngularDifference, Examples) {
  const UnitVector3 n = normalize({0.3, -0.2, 0.9});
  EXPECT_EQ(angular_difference(n, n), 0.0);
  EXPECT_DOUBLE_EQ(angular_difference(UnitVector3(1, 0, 0), UnitVector3(0, 1, 0)), kPi / 2);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(angular_difference(UnitVector3(1, 0, 0), UnitVector3(s, s, 0)), kPi / 4, 1e-15);
  EXPECT_DOUBLE_EQ(angular_difference(UnitVector3(1, 0, 0), UnitVector3(-1, 0, 0)), kPi);
}

TEST(AngularDifference, MatchesAcosInWellConditionedRange) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10000; ++t) {
    const Vector3 a = test::random_unit(rng), b = test::random_unit(rng);
    const double d = dot(a, b);
    if (std::abs(d) > 0.99) continue;
    EXPECT_NEAR(angular_difference(a, b), std::acos(d), 1e-12);
  }
}

TEST(AngularDifference, AccurateForTinyAngles) {
  // acos loses all precision here; atan2 keeps it.
  for (double eps : {1e-4, 1e-7, 1e-10}) {
    const Vector3 b{std::sin(eps), 0, std::cos(eps)};
    EXPECT_NEAR(angular_difference({0, 0, 1}, b), eps, eps * 1e-9);
    EXPECT_NEAR(angular_difference({0, 0, -1}, b), kPi - eps, 1e-15);
  }
}

TEST(AngularDifference, ScaleInvariantAndSymmetric) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Vector3 a = test::random_unit(rng), b = test::random_unit(rng);
    const double ref = angular_difference(a, b);
    EXPECT_NEAR(angular_difference(a * 3.7, b * 0.2), ref, 1e-14);
    EXPECT_NEAR(angular_difference(b, a), ref, 1e-15);
  }
}

// Central differences of the angle itself, written independently of the
// library's gradient code.
Vector3 numeric_grad(const Vector3& a, const Vector3& b, double h) {
  Vector3 g;
  for (int i = 0; i < 3; ++i) {
    Vector3 p = a, m = a;
    p[i] += h;
    m[i] -= h;
    g[i] = (angular_difference(p, b) - angular_difference(m, b)) / (2 * h);
  }
  return g;
}

TEST(AngularGradient, DegenerateAtMinimum) {
  const UnitVector3 n = normalize({1, 2, 3});
  const AngularGradient g = angular_difference_grad(n, n);
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.gradient, (Vector3{0, 0, 0}));
  EXPECT_TRUE(angular_difference_grad(n, -n).degenerate);
}

TEST(AngularGradient, MatchesFiniteDifferences) {
  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& [a, b] : {std::pair<Vector3, Vector3>{{1, 0, 0}, {0, 1, 0}}, {{s, s, 0}, {0, 0, 1}}}) {
    const AngularGradient g = angular_difference_grad(a, b);
    EXPECT_FALSE(g.degenerate);
    expect_vec_near(g.gradient, numeric_grad(a, b, 1e-6), 1e-9);
  }
}

TEST(AngularGradient, RandomPairsIncludingUnnormalisedInputs) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 500; ++t) {
    const Vector3 a = test::random_unit(rng) * (0.5 + t * 0.01);
    const Vector3 b = test::random_unit(rng);
    const AngularGradient g = angular_difference_grad(a, b);
    const Vector3 num = numeric_grad(a, b, 1e-6);
    EXPECT_LT(norm(g.gradient - num), 1e-7 * std::max(1.0, norm(num))) << t;
    // tangent to a: scaling a does not change the angle
    EXPECT_NEAR(dot(g.gradient, a), 0.0, 1e-12);
  }
}

TEST(AngularGradient, UnitMagnitudeForUnitInputs) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const Vector3 a = test::random_unit(rng), b = test::random_unit(rng);
    EXPECT_NEAR(norm(angular_difference_grad(a, b).gradient), 1.0, 1e-12);
  }
}

TEST(Mat3, YawAndAxisAngle) {
  const Mat3 r = Mat3::yaw(kPi / 2);
  expect_vec_near(r * Vector3{0, 0, 1}, {1, 0, 0}, 1e-15);
  EXPECT_TRUE(r.is_rotation());
  const Mat3 a = Mat3::axis_angle({0, 2, 0}, 0.7);
  const Mat3 y = Mat3::yaw(0.7);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(a.m[static_cast<std::size_t>(i)], y.m[static_cast<std::size_t>(i)], 1e-15);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const Vector3 axis = test::random_unit(rng);
    const Vector3 v = test::random_unit(rng);
    const Mat3 m = Mat3::axis_angle(axis, 1.1);
    EXPECT_TRUE(m.is_rotation());
    EXPECT_NEAR(dot(m * v, axis), dot(v, axis), 1e-14);
    expect_vec_near(m * axis, axis, 1e-14);
  }
}

TEST(Mat3, TransposeInvertsRotation) {
  const Mat3 r = Mat3::axis_angle({1, 2, 3}, 0.4);
  const Mat3 i = r * r.transpose();
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(i.m[static_cast<std::size_t>(k)], Mat3::identity().m[static_cast<std::size_t>(k)], 1e-15);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-15);
  Mat3 reflect;
  reflect(0, 0) = -1;
  EXPECT_FALSE(reflect.is_rotation());
}

}  // namespace
}  // namespace hsr
