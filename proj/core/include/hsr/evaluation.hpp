#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "hsr/geometry.hpp"
#include "hsr/grid.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

// Precision-coverage thresholds in degrees.
inline constexpr std::array<double, 4> kCoverageThresholds = {5.0, 11.25, 22.5, 30.0};

struct ErrorMap {
  ScalarGrid degrees;  // zero where masked out
  Mask mask;
};

// Per-pixel angle between prediction and ground truth in degrees over the
// intersected masks, optionally intersected with `extra` (e.g. a pole mask).
ErrorMap angular_error_map(const NormalField& pred, const NormalField& gt, const std::optional<Mask>& extra = std::nullopt);

struct MetricsReport {
  double mean_deg = 0.0;
  double median_deg = 0.0;  // lower-middle order statistic for even counts
  double rmse_deg = 0.0;
  std::array<double, 4> coverage{};  // percent at kCoverageThresholds
  std::size_t valid_pixel_count = 0;
};

// Throws kEmptyMask when there is nothing to summarise.
MetricsReport summarize(const ErrorMap& errors);
MetricsReport summarize(std::span<const double> errors_deg);

// Rotation3 in the sense of a proper rotation matrix.
using Rotation3 = Mat3;

struct Alignment {
  Rotation3 rotation;
  NormalField aligned;
};

// Kabsch: H = sum pred gt^T, H = U S V^T, R = V diag(1, 1, det(V U^T)) U^T.
// R minimises sum |R pred - gt|^2 over proper rotations. Throws
// kDegenerateCorrespondences when fewer than 3 pixels are valid or the second
// singular value falls below 1e-9 times the first.
Alignment svd_align(const NormalField& pred, const NormalField& gt);

// Applies R to every masked-in normal and renormalises.
NormalField rotate_field(const NormalField& field, const Rotation3& r);

}  // namespace hsr
