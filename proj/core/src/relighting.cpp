#include "hsr/relighting.hpp"

#include <algorithm>
#include <vector>

#include "hsr/parallel.hpp"
#include "hsr/projection.hpp"

namespace hsr {

ShBasis sh_basis(const Vector3& d) {
  const double x = d.x;
  const double y = d.z;
  const double z = d.y;
  return {
      sh::kY00,
      sh::kY1 * y,
      sh::kY1 * z,
      sh::kY1 * x,
      sh::kY2 * x * y,
      sh::kY2 * y * z,
      sh::kY20 * (3.0 * z * z - 1.0),
      sh::kY2 * x * z,
      sh::kY22 * (x * x - y * y),
  };
}

ShCoefficients project_env_to_sh(const FloatImage& env) {
  require_equirect(env.width(), env.height());
  const int w = env.width();
  const int h = env.height();
  const int channels = env.channels();
  for (float x : env.data()) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "environment map contains non-finite values");
    if (x < 0.0f) throw Error(ErrorCode::kInvalidArgument, "environment map contains negative radiance");
  }

  // Row partials are reduced afterwards in row order.
  std::vector<ShCoefficients> rows(static_cast<std::size_t>(h));
  parallel_for_rows(h, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      ShCoefficients& acc = rows[static_cast<std::size_t>(v)];
      const double weight = pixel_solid_angle(v, w, h);
      for (int u = 0; u < w; ++u) {
        const ShBasis y = sh_basis(equirect_direction(u + 0.5, v + 0.5, w, h));
        for (int c = 0; c < 3; ++c) {
          const double radiance = env.at(u, v, channels == 3 ? c : 0) * weight;
          auto& out = acc.rgb[static_cast<std::size_t>(c)];
          for (int k = 0; k < kShCount; ++k) out[static_cast<std::size_t>(k)] += radiance * y[static_cast<std::size_t>(k)];
        }
      }
    }
  });

  ShCoefficients total;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t k = 0; k < kShCount; ++k) total.rgb[c][k] += row.rgb[c][k];
    }
  }
  return total;
}

IrradianceMatrix irradiance_matrix(const ShCoefficients& coeffs) {
  using namespace sh;
  // Built in harmonic coordinates (x_sh, y_sh, z_sh, 1), then permuted to
  // (x, y, z, 1) of the library frame: x_sh -> x, y_sh -> z, z_sh -> y.
  constexpr std::array<int, 4> to_frame = {0, 2, 1, 3};
  IrradianceMatrix out;
  for (std::size_t c = 0; c < 3; ++c) {
    const ShBasis& l = coeffs.rgb[c];
    const std::array<double, 16> m_sh = {
        kC1 * l[8], kC1 * l[4],  kC1 * l[7], kC2 * l[3],
        kC1 * l[4], -kC1 * l[8], kC1 * l[5], kC2 * l[1],
        kC1 * l[7], kC1 * l[5],  kC3 * l[6], kC2 * l[2],
        kC2 * l[3], kC2 * l[1],  kC2 * l[2], kC4 * l[0] - kC5 * l[6],
    };
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        out.rgb[c][static_cast<std::size_t>(to_frame[static_cast<std::size_t>(i)] * 4 + to_frame[static_cast<std::size_t>(j)])] =
            m_sh[static_cast<std::size_t>(i * 4 + j)];
      }
    }
  }
  return out;
}

std::array<double, 3> irradiance(const Vector3& n, const IrradianceMatrix& m) {
  const std::array<double, 4> h = {n.x, n.y, n.z, 1.0};
  std::array<double, 3> e{};
  for (int c = 0; c < 3; ++c) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      double row = 0.0;
      for (int j = 0; j < 4; ++j) row += m.at(c, i, j) * h[static_cast<std::size_t>(j)];
      acc += h[static_cast<std::size_t>(i)] * row;
    }
    e[static_cast<std::size_t>(c)] = acc;
  }
  return e;
}

FloatImage relight(const FloatImage& albedo, const NormalField& normals, const ShCoefficients& coeffs) {
  if (albedo.width() != normals.width() || albedo.height() != normals.height()) {
    throw Error(ErrorCode::kShapeMismatch, "albedo and normals differ in size");
  }
  if (albedo.channels() != 3) throw Error(ErrorCode::kNotRgb, "albedo must have 3 channels");
  const IrradianceMatrix m = irradiance_matrix(coeffs);
  FloatImage out = albedo;
  parallel_for_rows(albedo.height(), [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < albedo.width(); ++u) {
        if (!normals.valid(u, v)) continue;
        const auto e = irradiance(normals.normal(u, v), m);
        for (int c = 0; c < 3; ++c) {
          const double lit = static_cast<double>(albedo.at(u, v, c)) * e[static_cast<std::size_t>(c)] / std::numbers::pi;
          out.at(u, v, c) = static_cast<float>(std::max(0.0, lit));
        }
      }
    }
  });
  return out;
}

}  // namespace hsr
