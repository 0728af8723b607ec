#include "hsr/geometry.hpp"

#include <string>

#include "hsr/error.hpp"

namespace hsr {

namespace {

constexpr double kZeroNorm = 1e-12;
constexpr double kPureTolerance = 1e-9;
constexpr double kDegenerateSine = 1e-9;

}  // namespace

UnitVector3::UnitVector3(double x, double y, double z) : UnitVector3(Vector3{x, y, z}) {}

UnitVector3::UnitVector3(const Vector3& v) : v_(v) {
  if (!is_finite(v) || std::abs(dot(v, v) - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "vector is not unit length");
  }
}

UnitVector3 normalize(const Vector3& v) {
  const double n = norm(v);
  if (!(n > kZeroNorm)) {
    throw Error(ErrorCode::kZeroVector, "cannot normalize a vector of norm " + std::to_string(n));
  }
  return UnitVector3(v.x / n, v.y / n, v.z / n, UnitVector3::Unchecked{});
}

Quaternion pure_quaternion(const UnitVector3& n) { return {0.0, n.x(), n.y(), n.z()}; }

Quaternion conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

Quaternion transition_quaternion(const Quaternion& q1, const Quaternion& q2) {
  if (std::abs(q1.w) > kPureTolerance || std::abs(q2.w) > kPureTolerance) {
    throw Error(ErrorCode::kNotPure, "transition quaternion needs pure inputs");
  }
  // Unit pure quaternions: q^-1 = q* = -q, so q1 q2^-1 = (q1.q2, -(q1 x q2)).
  return quat_multiply(q1, conjugate(q2));
}

double angular_difference(const Vector3& a, const Vector3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

AngularGradient angular_difference_grad(const Vector3& a, const Vector3& b) {
  const Vector3 c = cross(a, b);
  const double s = norm(c);
  const double d = dot(a, b);
  if (s < kDegenerateSine * norm(a) * norm(b)) {
    return {Vector3{}, true};
  }
  // theta = atan2(s, d); ds/da = (b x c) / s, dd/da = b.
  const double denom = s * s + d * d;
  const Vector3 ds = cross(b, c) / s;
  return {(ds * d - b * s) / denom, false};
}

Mat3 Mat3::from_rows(const Vector3& r0, const Vector3& r1, const Vector3& r2) {
  Mat3 r;
  r.m = {r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z};
  return r;
}

Mat3 Mat3::from_columns(const Vector3& c0, const Vector3& c1, const Vector3& c2) {
  return from_rows(c0, c1, c2).transpose();
}

Mat3 Mat3::yaw(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r;
  r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
  return r;
}

Mat3 Mat3::axis_angle(const Vector3& axis, double angle) {
  const Vector3 k = normalize(axis);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double t = 1.0 - c;
  Mat3 r;
  r.m = {
      t * k.x * k.x + c,       t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y,
      t * k.x * k.y + s * k.z, t * k.y * k.y + c,       t * k.y * k.z - s * k.x,
      t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, t * k.z * k.z + c,
  };
  return r;
}

Vector3 Mat3::operator*(const Vector3& v) const {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    }
  }
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  r.m = {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
  return r;
}

double Mat3::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Mat3::is_rotation(double tol) const {
  const Mat3 p = (*this) * transpose();
  const Mat3 id = identity();
  for (std::size_t i = 0; i < 9; ++i) {
    if (std::abs(p.m[i] - id.m[i]) > tol) return false;
  }
  return std::abs(determinant() - 1.0) <= tol;
}

}  // namespace hsr
