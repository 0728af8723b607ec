#include "hsr/evaluation.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hsr/parallel.hpp"

namespace hsr {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kRankTolerance = 1e-9;

}  // namespace

ErrorMap angular_error_map(const NormalField& pred, const NormalField& gt, const std::optional<Mask>& extra) {
  require_same_shape(pred, gt);
  ErrorMap out;
  out.mask = intersect(pred.mask(), gt.mask());
  if (extra) out.mask = intersect(out.mask, *extra);
  out.degrees = ScalarGrid(pred.width(), pred.height(), 0.0);
  parallel_for_rows(pred.height(), [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < pred.width(); ++u) {
        if (!out.mask(u, v)) continue;
        out.degrees(u, v) = angular_difference(pred.normal(u, v), gt.normal(u, v)) * kRadToDeg;
      }
    }
  });
  return out;
}

MetricsReport summarize(std::span<const double> errors_deg) {
  if (errors_deg.empty()) throw Error(ErrorCode::kEmptyMask, "no valid pixels to summarise");
  MetricsReport r;
  r.valid_pixel_count = errors_deg.size();
  const double n = static_cast<double>(errors_deg.size());

  double sum = 0.0;
  double sum_sq = 0.0;
  std::array<std::size_t, kCoverageThresholds.size()> hits{};
  for (double e : errors_deg) {
    sum += e;
    sum_sq += e * e;
    for (std::size_t t = 0; t < kCoverageThresholds.size(); ++t) hits[t] += (e <= kCoverageThresholds[t]);
  }
  r.mean_deg = sum / n;
  r.rmse_deg = std::sqrt(sum_sq / n);
  for (std::size_t t = 0; t < hits.size(); ++t) r.coverage[t] = 100.0 * static_cast<double>(hits[t]) / n;

  std::vector<double> sorted(errors_deg.begin(), errors_deg.end());
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  r.median_deg = *mid;
  return r;
}

MetricsReport summarize(const ErrorMap& errors) {
  std::vector<double> valid;
  valid.reserve(errors.degrees.size());
  for (std::size_t i = 0; i < errors.degrees.size(); ++i) {
    if (errors.mask[i]) valid.push_back(errors.degrees[i]);
  }
  return summarize(std::span<const double>(valid));
}

NormalField rotate_field(const NormalField& field, const Rotation3& r) {
  NormalField out = field;
  for (int v = 0; v < field.height(); ++v) {
    for (int u = 0; u < field.width(); ++u) {
      if (field.valid(u, v)) out.set(u, v, normalize(r * field.normal(u, v)));
    }
  }
  return out;
}

Alignment svd_align(const NormalField& pred, const NormalField& gt) {
  require_same_shape(pred, gt);
  const Mask mask = intersect(pred.mask(), gt.mask());

  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const Vector3& p = pred.normals()[i];
    const Vector3& g = gt.normals()[i];
    const Eigen::Vector3d pe(p.x, p.y, p.z);
    const Eigen::Vector3d ge(g.x, g.y, g.z);
    h += pe * ge.transpose();
    ++count;
  }
  if (count < 3) {
    throw Error(ErrorCode::kDegenerateCorrespondences, "alignment needs at least 3 valid pixels");
  }

  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(1) >= kRankTolerance * s(0)) || s(0) <= 0.0) {
    throw Error(ErrorCode::kDegenerateCorrespondences, "correspondences are (nearly) collinear");
  }
  const Eigen::Matrix3d& u = svd.matrixU();
  const Eigen::Matrix3d& v = svd.matrixV();
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = v * d * u.transpose();

  Alignment out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.rotation(i, j) = r(i, j);
  }
  out.aligned = rotate_field(pred, out.rotation);
  return out;
}

}  // namespace hsr
