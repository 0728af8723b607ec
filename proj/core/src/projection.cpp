#include "hsr/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hsr/parallel.hpp"

namespace hsr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleEpsilon = 1e-12;

struct Tap {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

// Bilinear taps at coordinates from direction_to_pixel (pixel centres sit on
// integers).
std::array<Tap, 4> equirect_taps(PixelCoords p, int width, int height) {
  const double x = p.u;
  const double y = p.v;
  const double x0f = std::floor(x);
  const double y0f = std::floor(y);
  const double fx = x - x0f;
  const double fy = y - y0f;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  auto wrap = [width](int u) { return ((u % width) + width) % width; };
  auto clamp_row = [height](int v) { return std::clamp(v, 0, height - 1); };
  return {{{wrap(x0), clamp_row(y0), (1 - fx) * (1 - fy)},
           {wrap(x0 + 1), clamp_row(y0), fx * (1 - fy)},
           {wrap(x0), clamp_row(y0 + 1), (1 - fx) * fy},
           {wrap(x0 + 1), clamp_row(y0 + 1), fx * fy}}};
}

// Bilinear taps inside a single face, clamped at the face border.
std::array<Tap, 4> face_taps(double i, double j, int size) {
  i = std::clamp(i, 0.0, static_cast<double>(size - 1));
  j = std::clamp(j, 0.0, static_cast<double>(size - 1));
  const int i0 = std::min(static_cast<int>(std::floor(i)), size - 1);
  const int j0 = std::min(static_cast<int>(std::floor(j)), size - 1);
  const int i1 = std::min(i0 + 1, size - 1);
  const int j1 = std::min(j0 + 1, size - 1);
  const double fi = i - i0;
  const double fj = j - j0;
  return {{{i0, j0, (1 - fi) * (1 - fj)}, {i1, j0, fi * (1 - fj)}, {i0, j1, (1 - fi) * fj}, {i1, j1, fi * fj}}};
}

struct SampledNormal {
  Vector3 n;
  bool valid = false;
};

SampledNormal sample_normals(const NormalField& field, const std::array<Tap, 4>& taps) {
  SampledNormal s;
  for (const Tap& t : taps) {
    if (t.weight <= 0.0) continue;
    if (!field.valid(t.u, t.v)) return {};
    s.n += field.normal(t.u, t.v) * t.weight;
  }
  s.valid = true;
  return s;
}

void sample_color(const FloatImage& img, const std::array<Tap, 4>& taps, float* out) {
  for (int c = 0; c < img.channels(); ++c) {
    double acc = 0.0;
    for (const Tap& t : taps) {
      if (t.weight <= 0.0) continue;
      acc += t.weight * static_cast<double>(img.at(t.u, t.v, c));
    }
    out[c] = static_cast<float>(acc);
  }
}

// Face-local continuous pixel coordinates for a global direction.
PixelCoords face_coords(CubeFace face, const Vector3& d, int size) {
  const Vector3 local = face_rotation(face).transpose() * d;
  const double a = local.x / local.z;
  const double b = local.y / local.z;
  return {(a + 1.0) * 0.5 * size - 0.5, (1.0 - b) * 0.5 * size - 0.5};
}

void require_face_size(int face_size) {
  if (face_size < 2) throw Error(ErrorCode::kInvalidArgument, "face size must be at least 2");
}

}  // namespace

void require_equirect(int width, int height) {
  if (height <= 0 || width != 2 * height) {
    throw Error(ErrorCode::kBadAspect,
                "equirectangular grids need width = 2 * height, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

Vector3 equirect_direction(double u, double v, int width, int height) {
  const double lon = 2.0 * kPi * u / width - kPi;
  const double lat = kPi / 2.0 - kPi * v / height;
  return from_spherical({lon, lat});
}

UnitVector3 pixel_to_direction(int u, int v, int width, int height) {
  require_equirect(width, height);
  if (u < 0 || v < 0 || u >= width || v >= height) {
    throw Error(ErrorCode::kOutOfBounds, "pixel (" + std::to_string(u) + ", " + std::to_string(v) + ") outside grid");
  }
  return normalize(equirect_direction(u + 0.5, v + 0.5, width, height));
}

PixelCoords direction_to_pixel(const Vector3& d, int width, int height) {
  const SphericalCoords s = to_spherical(d);
  return {(s.longitude + kPi) * width / (2.0 * kPi) - 0.5, (kPi / 2.0 - s.latitude) * height / kPi - 0.5};
}

SphericalCoords to_spherical(const Vector3& d) {
  const double r = norm(d);
  const double horizontal = std::hypot(d.x, d.z);
  double lon = horizontal < kPoleEpsilon * r ? 0.0 : std::atan2(d.x, d.z);
  if (lon >= kPi) lon -= 2.0 * kPi;
  const double lat = std::asin(std::clamp(d.y / r, -1.0, 1.0));
  return {lon, lat};
}

Vector3 from_spherical(const SphericalCoords& s) {
  const double c = std::cos(s.latitude);
  return {c * std::sin(s.longitude), std::sin(s.latitude), c * std::cos(s.longitude)};
}

double pixel_solid_angle(int v, int width, int height) {
  const double lat = kPi / 2.0 - kPi * (v + 0.5) / height;
  return std::cos(lat) * (2.0 * kPi / width) * (kPi / height);
}

std::string_view face_name(CubeFace face) {
  switch (face) {
    case CubeFace::kFront: return "front";
    case CubeFace::kRight: return "right";
    case CubeFace::kBack: return "back";
    case CubeFace::kLeft: return "left";
    case CubeFace::kUp: return "up";
    case CubeFace::kDown: return "down";
  }
  return "?";
}

const Mat3& face_rotation(CubeFace face) {
  static const std::array<Mat3, 6> rotations = [] {
    std::array<Mat3, 6> r;
    r[0] = Mat3::identity();
    r[1].m = {0, 0, 1, 0, 1, 0, -1, 0, 0};
    r[2].m = {-1, 0, 0, 0, 1, 0, 0, 0, -1};
    r[3].m = {0, 0, -1, 0, 1, 0, 1, 0, 0};
    r[4].m = {1, 0, 0, 0, 0, 1, 0, -1, 0};
    r[5].m = {1, 0, 0, 0, 0, -1, 0, 1, 0};
    return r;
  }();
  return rotations[static_cast<std::size_t>(face)];
}

CubeFace select_face(const Vector3& d) {
  const double ax = std::abs(d.x);
  const double ay = std::abs(d.y);
  const double az = std::abs(d.z);
  if (ay > ax && ay > az) return d.y > 0 ? CubeFace::kUp : CubeFace::kDown;
  if (az >= ax) return d.z >= 0 ? CubeFace::kFront : CubeFace::kBack;
  return d.x > 0 ? CubeFace::kRight : CubeFace::kLeft;
}

UnitVector3 face_pixel_direction(CubeFace face, int i, int j, int face_size) {
  const double a = 2.0 * (i + 0.5) / face_size - 1.0;
  const double b = 1.0 - 2.0 * (j + 0.5) / face_size;
  return normalize(face_rotation(face) * Vector3{a, b, 1.0});
}

CubemapNormals equirect_to_cubemap(const NormalField& field, int face_size) {
  require_equirect(field.width(), field.height());
  require_face_size(face_size);
  CubemapNormals out;
  out.face_size = face_size;
  for (CubeFace f : kCubeFaces) {
    NormalField& face = out.face(f);
    face = NormalField(face_size, face_size);
    const Mat3 to_local = face_rotation(f).transpose();
    parallel_for_rows(face_size, [&](int j0, int j1) {
      for (int j = j0; j < j1; ++j) {
        for (int i = 0; i < face_size; ++i) {
          const Vector3 d = face_pixel_direction(f, i, j, face_size);
          const auto taps = equirect_taps(direction_to_pixel(d, field.width(), field.height()), field.width(), field.height());
          const SampledNormal s = sample_normals(field, taps);
          const Vector3 local = to_local * s.n;
          if (!s.valid || norm(local) <= kPoleEpsilon) {
            face.normals()(i, j) = Vector3{};
            face.invalidate(i, j);
          } else {
            face.set(i, j, normalize(local));
          }
        }
      }
    });
  }
  return out;
}

CubemapImage equirect_to_cubemap(const FloatImage& image, int face_size) {
  require_equirect(image.width(), image.height());
  require_face_size(face_size);
  CubemapImage out;
  out.face_size = face_size;
  for (CubeFace f : kCubeFaces) {
    FloatImage& face = out.face(f);
    face = FloatImage(face_size, face_size, image.channels());
    parallel_for_rows(face_size, [&](int j0, int j1) {
      for (int j = j0; j < j1; ++j) {
        for (int i = 0; i < face_size; ++i) {
          const Vector3 d = face_pixel_direction(f, i, j, face_size);
          const auto taps = equirect_taps(direction_to_pixel(d, image.width(), image.height()), image.width(), image.height());
          sample_color(image, taps, &face.at(i, j, 0));
        }
      }
    });
  }
  return out;
}

NormalField cubemap_to_equirect(const CubemapNormals& faces, int width, int height, bool rotate_normals) {
  require_equirect(width, height);
  const int size = faces.face_size;
  require_face_size(size);
  for (const auto& f : faces.faces) {
    if (f.width() != size || f.height() != size) throw Error(ErrorCode::kShapeMismatch, "cube face has wrong size");
  }
  NormalField out(width, height);
  parallel_for_rows(height, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < width; ++u) {
        const Vector3 d = equirect_direction(u + 0.5, v + 0.5, width, height);
        const CubeFace f = select_face(d);
        const PixelCoords p = face_coords(f, d, size);
        const SampledNormal s = sample_normals(faces.face(f), face_taps(p.u, p.v, size));
        const Vector3 n = rotate_normals ? face_rotation(f) * s.n : s.n;
        if (!s.valid || norm(n) <= kPoleEpsilon) {
          out.normals()(u, v) = Vector3{};
          out.invalidate(u, v);
        } else {
          out.set(u, v, normalize(n));
        }
      }
    }
  });
  return out;
}

FloatImage cubemap_to_equirect(const CubemapImage& faces, int width, int height) {
  require_equirect(width, height);
  const int size = faces.face_size;
  require_face_size(size);
  const int channels = faces.faces[0].channels();
  for (const auto& f : faces.faces) {
    if (f.width() != size || f.height() != size || f.channels() != channels) {
      throw Error(ErrorCode::kShapeMismatch, "cube faces disagree in size or channels");
    }
  }
  FloatImage out(width, height, channels);
  parallel_for_rows(height, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < width; ++u) {
        const Vector3 d = equirect_direction(u + 0.5, v + 0.5, width, height);
        const CubeFace f = select_face(d);
        const PixelCoords p = face_coords(f, d, size);
        sample_color(faces.face(f), face_taps(p.u, p.v, size), &out.at(u, v, 0));
      }
    }
  });
  return out;
}

Mask pole_mask(int width, int height, PoleMaskRule rule) {
  require_equirect(width, height);
  Mask mask(width, height, 1);
  for (int v = 0; v < height; ++v) {
    const double lat = kPi / 2.0 - kPi * (v + 0.5) / height;
    for (int u = 0; u < width; ++u) {
      bool drop = false;
      if (rule == PoleMaskRule::kLatitude) {
        drop = std::abs(lat) > kPi / 4.0;
      } else {
        const CubeFace f = select_face(equirect_direction(u + 0.5, v + 0.5, width, height));
        drop = f == CubeFace::kUp || f == CubeFace::kDown;
      }
      if (drop) mask(u, v) = 0;
    }
  }
  return mask;
}

}  // namespace hsr
