#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "hsr/geometry.hpp"
#include "hsr/image_io.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

inline constexpr int kShCount = 9;

// Real spherical harmonics up to band 2 in the order
// (0,0) (1,-1) (1,0) (1,1) (2,-2) (2,-1) (2,0) (2,1) (2,2).
// The harmonics' polar axis is the frame's up axis: with (x, y, z) in this
// library's frame the harmonic coordinates are (x_sh, y_sh, z_sh) = (x, z, y).
using ShBasis = std::array<double, kShCount>;

namespace sh {
inline const double kY00 = 0.5 / std::sqrt(std::numbers::pi);              // 0.282095
inline const double kY1 = std::sqrt(3.0 / (4.0 * std::numbers::pi));        // 0.488603
inline const double kY2 = std::sqrt(15.0 / (4.0 * std::numbers::pi));       // 1.092548
inline const double kY20 = std::sqrt(5.0 / (16.0 * std::numbers::pi));      // 0.315392
inline const double kY22 = std::sqrt(15.0 / (16.0 * std::numbers::pi));     // 0.546274

// Clamped-cosine convolution weights per band.
inline constexpr double kA0 = std::numbers::pi;
inline constexpr double kA1 = 2.0 * std::numbers::pi / 3.0;
inline constexpr double kA2 = std::numbers::pi / 4.0;

// Quadratic-form constants (0.429043, 0.511664, 0.743125, 0.886227, 0.247708).
inline const double kC1 = kA2 * kY2 / 2.0;
inline const double kC2 = kA1 * kY1 / 2.0;
inline const double kC3 = 3.0 * kA2 * kY20;
inline const double kC4 = kA0 * kY00;
inline const double kC5 = kA2 * kY20;
}  // namespace sh

ShBasis sh_basis(const Vector3& d);

struct ShCoefficients {
  std::array<ShBasis, 3> rgb{};  // rgb[channel][basis index]
};

// L_lm = sum over pixels of env(p) Y_lm(d_p) w_p with solid-angle weights
// w_p = cos(lat) (2 pi / W) (pi / H). Accepts 1- or 3-channel maps; a single
// channel is replicated. Throws kBadAspect, kNonFinite.
ShCoefficients project_env_to_sh(const FloatImage& env);

// Per channel a symmetric 4x4 M with E(n) = [n 1]^T M [n 1].
struct IrradianceMatrix {
  std::array<std::array<double, 16>, 3> rgb{};

  double at(int channel, int row, int col) const {
    return rgb[static_cast<std::size_t>(channel)][static_cast<std::size_t>(row * 4 + col)];
  }
};

IrradianceMatrix irradiance_matrix(const ShCoefficients& coeffs);
std::array<double, 3> irradiance(const Vector3& n, const IrradianceMatrix& m);

// out = max(0, albedo * E(n) / pi) per channel; masked-out pixels copy the
// albedo. Throws kShapeMismatch.
FloatImage relight(const FloatImage& albedo, const NormalField& normals, const ShCoefficients& coeffs);

}  // namespace hsr
