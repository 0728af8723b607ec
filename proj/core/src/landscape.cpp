#include "hsr/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hsr/parallel.hpp"
#include "hsr/projection.hpp"

namespace hsr {

double pair_loss(LossKind kind, const Vector3& query, const Vector3& reference) {
  switch (kind) {
    case LossKind::kQuaternion: return angular_difference(query, reference);
    case LossKind::kCosine: return 1.0 - dot(query, reference);
    case LossKind::kL2: return norm(query - reference);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown loss kind");
}

ScalarGrid generate_landscape(LossKind kind, const UnitVector3& reference, int width, int height) {
  require_equirect(width, height);
  ScalarGrid grid(width, height, 0.0);
  parallel_for_rows(height, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < width; ++u) {
        grid(u, v) = pair_loss(kind, pixel_to_direction(u, v, width, height), reference);
      }
    }
  });
  return grid;
}

ConvexityReport landscape_convexity_report(const ScalarGrid& quat, const ScalarGrid& cosine,
                                           const UnitVector3& reference) {
  if (!quat.same_shape(cosine)) throw Error(ErrorCode::kShapeMismatch, "landscapes differ in size");
  const int w = quat.width();
  const int h = quat.height();
  require_equirect(w, h);
  constexpr double kPi = std::numbers::pi;

  ConvexityReport r;
  for (std::size_t i = 0; i < quat.size(); ++i) {
    const double from_cos = std::acos(std::clamp(1.0 - cosine[i], -1.0, 1.0));
    r.max_identity_error = std::max(r.max_identity_error, std::abs(quat[i] - from_cos));
  }

  // Closed loop: down the reference meridian, back up the opposite one.
  const int u0 = (static_cast<int>(std::lround(direction_to_pixel(reference, w, h).u)) % w + w) % w;
  const int u1 = (u0 + w / 2) % w;
  struct Sample {
    int u, v;
  };
  std::vector<Sample> path;
  path.reserve(static_cast<std::size_t>(2 * h + 1));
  for (int v = 0; v < h; ++v) path.push_back({u0, v});
  for (int v = h - 1; v >= 0; --v) path.push_back({u1, v});
  path.push_back({u0, 0});

  const double min_step = 1e-3 * kPi / h;
  r.quat_min_slope_interior = std::numeric_limits<double>::infinity();
  r.quat_min_slope_tail = std::numeric_limits<double>::infinity();
  r.cos_min_slope_tail = std::numeric_limits<double>::infinity();
  r.cos_max_slope_tail = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Sample a = path[k];
    const Sample b = path[k + 1];
    const double sa = angular_difference(pixel_to_direction(a.u, a.v, w, h), reference);
    const double sb = angular_difference(pixel_to_direction(b.u, b.v, w, h), reference);
    const double ds = sb - sa;
    if (std::abs(ds) < min_step) continue;
    const double lo = std::min(sa, sb);
    const double hi = std::max(sa, sb);
    const double q_slope = (quat(b.u, b.v) - quat(a.u, a.v)) / ds;
    const double c_slope = (cosine(b.u, b.v) - cosine(a.u, a.v)) / ds;
    if (lo > kInteriorMargin && hi < kPi - kInteriorMargin) {
      r.quat_min_slope_interior = std::min(r.quat_min_slope_interior, q_slope);
      ++r.interior_segments;
    }
    if (lo >= kPi - kTailWidth) {
      r.quat_min_slope_tail = std::min(r.quat_min_slope_tail, q_slope);
      r.cos_max_slope_tail = std::max(r.cos_max_slope_tail, c_slope);
      r.cos_min_slope_tail = std::min(r.cos_min_slope_tail, c_slope);
      ++r.tail_segments;
    }
  }
  return r;
}

Grid<std::uint8_t> landscape_heatmap(const ScalarGrid& grid) {
  Grid<std::uint8_t> out(grid.width(), grid.height(), 255);
  if (grid.empty()) return out;
  const auto [lo, hi] = std::minmax_element(grid.data().begin(), grid.data().end());
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = range > 0.0 ? (grid[i] - *lo) / range : 0.0;
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)));
  }
  return out;
}

}  // namespace hsr
