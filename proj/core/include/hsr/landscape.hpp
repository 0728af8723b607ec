#pragma once

#include <cstddef>
#include <cstdint>

#include "hsr/grid.hpp"
#include "hsr/losses.hpp"

namespace hsr {

inline constexpr int kLandscapeWidth = 512;
inline constexpr int kLandscapeHeight = 256;

// Loss of a single prediction `query` against `reference` for the given kind.
double pair_loss(LossKind kind, const Vector3& query, const Vector3& reference);

// Cell (u, v) holds pair_loss(kind, pixel_to_direction(u, v), reference).
ScalarGrid generate_landscape(LossKind kind, const UnitVector3& reference, int width = kLandscapeWidth,
                              int height = kLandscapeHeight);

// Slopes of the quaternion and cosine landscapes with respect to arc angle,
// measured as chord slopes between consecutive samples on the great circle
// formed by the meridian through the reference and its opposite meridian.
struct ConvexityReport {
  double quat_min_slope_interior = 0.0;  // arc angle in (0.05, pi - 0.05)
  double quat_min_slope_tail = 0.0;      // arc angle in [pi - 0.2, pi)
  double cos_max_slope_tail = 0.0;
  double cos_min_slope_tail = 0.0;
  double max_identity_error = 0.0;  // max |quat - acos(1 - cos)| over all cells
  std::size_t interior_segments = 0;
  std::size_t tail_segments = 0;
};

inline constexpr double kInteriorMargin = 0.05;
inline constexpr double kTailWidth = 0.2;

ConvexityReport landscape_convexity_report(const ScalarGrid& quat, const ScalarGrid& cosine,
                                           const UnitVector3& reference);

// Linear gray, darker means higher loss.
Grid<std::uint8_t> landscape_heatmap(const ScalarGrid& grid);

}  // namespace hsr
