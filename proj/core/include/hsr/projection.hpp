#pragma once

#include <array>
#include <string_view>

#include "hsr/geometry.hpp"
#include "hsr/grid.hpp"
#include "hsr/image_io.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

// Equirectangular convention: pixel centre (u + 0.5, v + 0.5) sits at
//   longitude = 2 pi (u + 0.5) / width - pi     in [-pi, pi)
//   latitude  = pi / 2 - pi (v + 0.5) / height  (v grows downward)
// and maps to (cos lat sin lon, sin lat, cos lat cos lon), so the image centre
// looks down +z and the top row is near +y.
struct SphericalCoords {
  double longitude = 0.0;
  double latitude = 0.0;
};

struct PixelCoords {
  double u = 0.0;
  double v = 0.0;
};

// Throws kBadAspect unless width == 2 * height (and height > 0).
void require_equirect(int width, int height);

UnitVector3 pixel_to_direction(int u, int v, int width, int height);
// Continuous version without bounds checks; (u, v) are pixel coordinates
// where integer + 0.5 is a pixel centre.
Vector3 equirect_direction(double u, double v, int width, int height);
// Inverse of equirect_direction with centre-of-pixel offsets, i.e. it returns
// (u, v) such that pixel_to_direction(u, v) reproduces d for pixel centres.
// At the poles the longitude is taken as 0.
PixelCoords direction_to_pixel(const Vector3& d, int width, int height);

SphericalCoords to_spherical(const Vector3& d);
Vector3 from_spherical(const SphericalCoords& s);

// cos(latitude) * (2 pi / width) * (pi / height) for the pixel row `v`.
double pixel_solid_angle(int v, int width, int height);

enum class CubeFace { kFront = 0, kRight, kBack, kLeft, kUp, kDown };
inline constexpr std::array<CubeFace, 6> kCubeFaces = {CubeFace::kFront, CubeFace::kRight, CubeFace::kBack,
                                                       CubeFace::kLeft,  CubeFace::kUp,    CubeFace::kDown};
std::string_view face_name(CubeFace face);

// Maps the face-local camera frame (x right, y up, z looking out of the face)
// to the global frame. Front is the identity; right/back/left are yaws; the
// up face's bottom edge and the down face's top edge adjoin the front face.
const Mat3& face_rotation(CubeFace face);

// Face pierced by `d`: largest absolute component, horizontal faces win ties.
CubeFace select_face(const Vector3& d);

// Global direction through the centre of face pixel (i, j).
UnitVector3 face_pixel_direction(CubeFace face, int i, int j, int face_size);

template <class Payload>
struct Cubemap {
  int face_size = 0;
  std::array<Payload, 6> faces;

  Payload& face(CubeFace f) { return faces[static_cast<std::size_t>(f)]; }
  const Payload& face(CubeFace f) const { return faces[static_cast<std::size_t>(f)]; }
};

using CubemapNormals = Cubemap<NormalField>;
using CubemapImage = Cubemap<FloatImage>;

// Gnomonic 90-degree views sampled bilinearly (longitude wraps, latitude is
// clamped). A sample is masked in only if every contributing tap is; normals
// are expressed in the face-local frame.
CubemapNormals equirect_to_cubemap(const NormalField& field, int face_size);
CubemapImage equirect_to_cubemap(const FloatImage& image, int face_size);

// Reassembles an equirectangular grid; each pixel samples the face its
// direction pierces. With rotate_normals the sampled face-local vectors are
// taken back to the global frame and renormalised.
NormalField cubemap_to_equirect(const CubemapNormals& faces, int width, int height, bool rotate_normals = true);
FloatImage cubemap_to_equirect(const CubemapImage& faces, int width, int height);

enum class PoleMaskRule {
  kLatitude,  // drop rows whose centre latitude exceeds pi/4 in magnitude
  kCubeFace,  // drop pixels whose direction pierces the up or down face
};

Mask pole_mask(int width, int height, PoleMaskRule rule = PoleMaskRule::kLatitude);

}  // namespace hsr
