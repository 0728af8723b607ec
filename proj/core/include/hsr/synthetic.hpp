#pragma once

#include <cstdint>

#include "hsr/normal_field.hpp"

namespace hsr {

// Synthetic equirectangular box room seen from its centre: four walls, floor
// and ceiling, each a constant inward-facing normal, so region borders are
// sharp 90-degree edges. A non-zero `curvature` bends every wall by the
// smooth offset below, keeping the edges sharp.
NormalField make_room_field(int width, int height, double curvature = 0.0);

// Smooth equirectangular field: each normal is the reversed viewing ray plus
// a slowly varying offset that is continuous on the sphere.
NormalField make_smooth_field(int width, int height);

// Offset used by both fields, continuous on the sphere.
Vector3 smooth_offset(const Vector3& d);

// Independent uniformly distributed unit normals (any aspect ratio).
NormalField random_unit_field(int width, int height, std::uint64_t seed);

// Uniform random unit vector for draw `counter` of `seed`.
Vector3 random_unit_vector(std::uint64_t seed, std::uint64_t counter);

struct FieldPair {
  NormalField pred;
  NormalField gt;
};

// Independent random pred and gt fields with `masked` pixels (chosen by the
// seed) invalidated in gt, half of them also in pred.
FieldPair make_random_pair(int width, int height, std::uint64_t seed, int masked = 8);

}  // namespace hsr
