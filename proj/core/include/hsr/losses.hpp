#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "hsr/grid.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

enum class LossKind { kQuaternion, kCosine, kL2 };

std::string_view to_string(LossKind kind);
// Accepts "quat"/"quaternion", "cos"/"cosine", "l2".
LossKind parse_loss_kind(std::string_view name);

inline constexpr double kDefaultAlpha = 0.025;

struct LossConfig {
  double alpha = kDefaultAlpha;  // smoothness weight, in [0, 1)
  LossKind kind = LossKind::kQuaternion;

  void validate() const;
};

// Per-pixel losses use the intersection of both masks. `gradient` holds the
// derivative of the summed per-pixel loss with respect to the unconstrained
// prediction vectors; the gradient of `objective` is gradient * objective_scale().
struct LossReport {
  double objective = 0.0;  // sum(per_pixel) / max(1, valid_count)
  ScalarGrid per_pixel;
  Grid<Vector3> gradient;
  std::size_t valid_count = 0;
  std::size_t degenerate_count = 0;  // pixels whose gradient was zeroed

  double objective_scale() const { return 1.0 / static_cast<double>(valid_count > 0 ? valid_count : 1); }
};

LossReport quaternion_loss(const NormalField& pred, const NormalField& gt);
LossReport cosine_loss(const NormalField& pred, const NormalField& gt);
LossReport l2_loss(const NormalField& pred, const NormalField& gt);
LossReport data_loss(const NormalField& pred, const NormalField& gt, LossKind kind);

enum class Axis { kHorizontal, kVertical };

// Forward difference N(p + axis) - N(p) per pixel. Differences that touch a
// masked-out or out-of-bounds neighbour are zero. Throws kTooSmall when the
// field has fewer than two pixels along `axis`.
Grid<Vector3> forward_differences(const NormalField& field, Axis axis);

// Per-pixel Euclidean norm of the stacked horizontal and vertical forward
// differences, masked by the field's own mask. Throws kTooSmall if either
// dimension is below 2.
LossReport smoothness(const NormalField& pred);

// (1 - alpha) * data loss + alpha * smoothness, both under the intersected
// mask and averaged over the same masked-in pixel count.
LossReport objective(const NormalField& pred, const NormalField& gt, const LossConfig& cfg);

struct GradientCheck {
  double max_relative_error = 0.0;  // max |analytic - numeric| / max |numeric|
  double max_abs_error = 0.0;
  std::size_t samples = 0;
};

// Central finite differences of `objective` over a random sample of
// masked-in pixel components, compared with the analytic gradient.
// step must lie in (1e-8, 1e-3).
GradientCheck finite_difference_check(const NormalField& pred, const NormalField& gt, const LossConfig& cfg,
                                      double step, std::uint64_t seed = 1337, std::size_t sample_count = 300);

}  // namespace hsr
