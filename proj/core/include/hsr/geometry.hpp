#pragma once

#include <array>
#include <cmath>

namespace hsr {

// Left-handed frame used throughout: +x right, +y up, +z forward.
struct Vector3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vector3 operator+(const Vector3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vector3 operator-(const Vector3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vector3 operator-() const { return {-x, -y, -z}; }
  constexpr Vector3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vector3 operator/(double s) const { return {x / s, y / s, z / s}; }
  constexpr Vector3& operator+=(const Vector3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vector3& operator-=(const Vector3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr bool operator==(const Vector3&) const = default;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vector3 operator*(double s, const Vector3& v) { return v * s; }

constexpr double dot(const Vector3& a, const Vector3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vector3 cross(const Vector3& a, const Vector3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vector3& v) { return std::sqrt(dot(v, v)); }

inline bool is_finite(const Vector3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// A direction of unit Euclidean length (tolerance 1e-6). Construction from raw
// components validates; `normalize` is the general entry point.
class UnitVector3 {
 public:
  static constexpr double kTolerance = 1e-6;

  UnitVector3() = default;  // +z
  UnitVector3(double x, double y, double z);
  explicit UnitVector3(const Vector3& v);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vector3& vec() const { return v_; }
  operator const Vector3&() const { return v_; }  // NOLINT(google-explicit-constructor)

  UnitVector3 operator-() const { return UnitVector3(-v_.x, -v_.y, -v_.z, Unchecked{}); }

 private:
  struct Unchecked {};
  UnitVector3(double x, double y, double z, Unchecked) : v_{x, y, z} {}
  friend UnitVector3 normalize(const Vector3& v);

  Vector3 v_{0.0, 0.0, 1.0};
};

// Throws Error(kZeroVector) when ||v|| <= 1e-12.
UnitVector3 normalize(const Vector3& v);

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr bool operator==(const Quaternion&) const = default;
  constexpr Vector3 imaginary() const { return {x, y, z}; }
};

Quaternion pure_quaternion(const UnitVector3& n);
Quaternion conjugate(const Quaternion& q);
// Hamilton product.
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);

// q1 * q2^-1 for pure unit quaternions, using q2^-1 = q2* = -q2. The real part
// is n1.n2 and the imaginary part has magnitude |n1 x n2|. Throws kNotPure if
// |w| > 1e-9 on either input.
Quaternion transition_quaternion(const Quaternion& q1, const Quaternion& q2);

// Angle between two directions, atan2(|a x b|, a.b) in [0, pi]. Scale
// invariant in both arguments, so it is well defined for any non-zero vectors.
double angular_difference(const Vector3& a, const Vector3& b);
inline double angular_difference(const UnitVector3& a, const UnitVector3& b) {
  return angular_difference(a.vec(), b.vec());
}

struct AngularGradient {
  Vector3 gradient;
  // Set at theta = 0 or pi where the descent direction is undefined; the
  // gradient is then the zero vector.
  bool degenerate = false;
};

// d theta / d a for theta = angular_difference(a, b), taken with respect to
// the unconstrained components of `a`.
AngularGradient angular_difference_grad(const Vector3& a, const Vector3& b);
inline AngularGradient angular_difference_grad(const UnitVector3& a, const UnitVector3& b) {
  return angular_difference_grad(a.vec(), b.vec());
}

// Row-major 3x3 matrix; used for face rotations and alignment results.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static constexpr Mat3 identity() { return Mat3{}; }
  static Mat3 from_rows(const Vector3& r0, const Vector3& r1, const Vector3& r2);
  static Mat3 from_columns(const Vector3& c0, const Vector3& c1, const Vector3& c2);
  // Rotation about +y by `angle` radians; carries +z toward +x.
  static Mat3 yaw(double angle);
  // Rotation about `axis` (normalized internally) by `angle` radians,
  // following the same sense as `yaw` for axis = +y.
  static Mat3 axis_angle(const Vector3& axis, double angle);

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }

  Vector3 operator*(const Vector3& v) const;
  Mat3 operator*(const Mat3& o) const;
  Mat3 transpose() const;
  double determinant() const;
  bool is_rotation(double tol = 1e-9) const;
};

}  // namespace hsr
