#include "hsr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hsr/parallel.hpp"
#include "hsr/random.hpp"

namespace hsr {

namespace {

constexpr double kCoincident = 1e-12;

struct PixelTerm {
  double value = 0.0;
  Vector3 grad;
  bool degenerate = false;
};

PixelTerm quaternion_term(const Vector3& p, const Vector3& g) {
  const auto grad = angular_difference_grad(p, g);
  return {angular_difference(p, g), grad.gradient, grad.degenerate};
}

PixelTerm cosine_term(const Vector3& p, const Vector3& g) { return {1.0 - dot(p, g), -g, false}; }

PixelTerm l2_term(const Vector3& p, const Vector3& g) {
  const Vector3 d = p - g;
  const double n = norm(d);
  if (n < kCoincident) return {n, Vector3{}, true};
  return {n, d / n, false};
}

double reduce_row_major(const ScalarGrid& grid) {
  double sum = 0.0;
  for (double x : grid.data()) sum += x;
  return sum;
}

std::size_t count(const Mask& m) {
  std::size_t n = 0;
  for (auto x : m.data()) n += (x != 0);
  return n;
}

template <class Term>
LossReport pixelwise(const NormalField& pred, const NormalField& gt, Term term) {
  require_same_shape(pred, gt);
  const Mask mask = intersect(pred.mask(), gt.mask());
  const int w = pred.width();
  LossReport r;
  r.per_pixel = ScalarGrid(w, pred.height(), 0.0);
  r.gradient = Grid<Vector3>(w, pred.height());
  Mask degenerate(w, pred.height(), 0);

  parallel_for_rows(pred.height(), [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!mask(u, v)) continue;
        const PixelTerm t = term(pred.normal(u, v), gt.normal(u, v));
        r.per_pixel(u, v) = t.value;
        r.gradient(u, v) = t.grad;
        degenerate(u, v) = t.degenerate ? 1 : 0;
      }
    }
  });

  r.valid_count = count(mask);
  r.degenerate_count = count(degenerate);
  r.objective = reduce_row_major(r.per_pixel) * r.objective_scale();
  return r;
}

// Smoothness over an explicit mask. Two passes: forward differences and norms,
// then the adjoint gathered per pixel so rows can be processed independently.
LossReport smoothness_masked(const Grid<Vector3>& normals, const Mask& mask) {
  const int w = normals.width();
  const int h = normals.height();
  if (w < 2 || h < 2) {
    throw Error(ErrorCode::kTooSmall,
                "smoothness needs at least 2x2 pixels, got " + std::to_string(w) + "x" + std::to_string(h));
  }
  Grid<Vector3> dx(w, h);
  Grid<Vector3> dy(w, h);
  LossReport r;
  r.per_pixel = ScalarGrid(w, h, 0.0);
  r.gradient = Grid<Vector3>(w, h);
  Mask degenerate(w, h, 0);

  parallel_for_rows(h, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!mask(u, v)) continue;
        const Vector3& n = normals(u, v);
        if (u + 1 < w && mask(u + 1, v)) dx(u, v) = normals(u + 1, v) - n;
        if (v + 1 < h && mask(u, v + 1)) dy(u, v) = normals(u, v + 1) - n;
        r.per_pixel(u, v) = std::sqrt(dot(dx(u, v), dx(u, v)) + dot(dy(u, v), dy(u, v)));
      }
    }
  });

  const auto& s = r.per_pixel;
  parallel_for_rows(h, [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < w; ++u) {
        if (!mask(u, v)) continue;
        Vector3 g;
        if (s(u, v) > 0.0) {
          g -= (dx(u, v) + dy(u, v)) / s(u, v);
        } else {
          degenerate(u, v) = 1;
        }
        if (u > 0 && s(u - 1, v) > 0.0) g += dx(u - 1, v) / s(u - 1, v);
        if (v > 0 && s(u, v - 1) > 0.0) g += dy(u, v - 1) / s(u, v - 1);
        r.gradient(u, v) = g;
      }
    }
  });

  r.valid_count = count(mask);
  r.degenerate_count = count(degenerate);
  r.objective = reduce_row_major(r.per_pixel) * r.objective_scale();
  return r;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kQuaternion: return "quat";
    case LossKind::kCosine: return "cos";
    case LossKind::kL2: return "l2";
  }
  return "?";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "quat" || name == "quaternion") return LossKind::kQuaternion;
  if (name == "cos" || name == "cosine") return LossKind::kCosine;
  if (name == "l2" || name == "L2") return LossKind::kL2;
  throw Error(ErrorCode::kInvalidArgument, "unknown loss kind '" + std::string(name) + "'");
}

void LossConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
}

LossReport quaternion_loss(const NormalField& pred, const NormalField& gt) {
  return pixelwise(pred, gt, quaternion_term);
}

LossReport cosine_loss(const NormalField& pred, const NormalField& gt) { return pixelwise(pred, gt, cosine_term); }

LossReport l2_loss(const NormalField& pred, const NormalField& gt) { return pixelwise(pred, gt, l2_term); }

LossReport data_loss(const NormalField& pred, const NormalField& gt, LossKind kind) {
  switch (kind) {
    case LossKind::kQuaternion: return quaternion_loss(pred, gt);
    case LossKind::kCosine: return cosine_loss(pred, gt);
    case LossKind::kL2: return l2_loss(pred, gt);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown loss kind");
}

Grid<Vector3> forward_differences(const NormalField& field, Axis axis) {
  const int w = field.width();
  const int h = field.height();
  const int extent = axis == Axis::kHorizontal ? w : h;
  if (extent < 2) {
    throw Error(ErrorCode::kTooSmall, std::string(axis == Axis::kHorizontal ? "horizontal" : "vertical") +
                                          " difference needs at least 2 pixels");
  }
  const int du = axis == Axis::kHorizontal ? 1 : 0;
  const int dv = 1 - du;
  Grid<Vector3> out(w, h);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      if (!field.valid(u, v) || !field.normals().contains(u + du, v + dv) || !field.valid(u + du, v + dv)) continue;
      out(u, v) = field.normal(u + du, v + dv) - field.normal(u, v);
    }
  }
  return out;
}

LossReport smoothness(const NormalField& pred) { return smoothness_masked(pred.normals(), pred.mask()); }

LossReport objective(const NormalField& pred, const NormalField& gt, const LossConfig& cfg) {
  cfg.validate();
  LossReport data = data_loss(pred, gt, cfg.kind);
  if (cfg.alpha == 0.0) return data;

  const LossReport smooth = smoothness_masked(pred.normals(), intersect(pred.mask(), gt.mask()));
  const double a = cfg.alpha;
  const double b = 1.0 - a;
  LossReport r;
  r.per_pixel = ScalarGrid(pred.width(), pred.height(), 0.0);
  r.gradient = Grid<Vector3>(pred.width(), pred.height());
  for (std::size_t i = 0; i < r.per_pixel.size(); ++i) {
    r.per_pixel[i] = b * data.per_pixel[i] + a * smooth.per_pixel[i];
    r.gradient[i] = data.gradient[i] * b + smooth.gradient[i] * a;
  }
  r.valid_count = data.valid_count;
  r.degenerate_count = data.degenerate_count;
  r.objective = reduce_row_major(r.per_pixel) * r.objective_scale();
  return r;
}

GradientCheck finite_difference_check(const NormalField& pred, const NormalField& gt, const LossConfig& cfg,
                                      double step, std::uint64_t seed, std::size_t sample_count) {
  if (!(step > 1e-8 && step < 1e-3)) {
    throw Error(ErrorCode::kInvalidArgument, "finite-difference step must lie in (1e-8, 1e-3)");
  }
  const LossReport base = objective(pred, gt, cfg);
  const Mask mask = intersect(pred.mask(), gt.mask());

  std::vector<std::size_t> components;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    for (std::size_t c = 0; c < 3; ++c) components.push_back(i * 3 + c);
  }
  // Deterministic partial Fisher-Yates driven by the counter generator.
  const CounterRng rng(seed);
  const std::size_t n = std::min(sample_count, components.size());
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t span = components.size() - k;
    const auto j = k + static_cast<std::size_t>(rng.uniform(k) * static_cast<double>(span));
    std::swap(components[k], components[std::min(j, components.size() - 1)]);
  }
  components.resize(n);
  std::sort(components.begin(), components.end());

  NormalField probe = pred;
  double max_numeric = 0.0;
  GradientCheck out;
  out.samples = n;
  for (std::size_t id : components) {
    const std::size_t pixel = id / 3;
    const int c = static_cast<int>(id % 3);
    Vector3& x = probe.normals()[pixel];
    const double original = x[c];
    x[c] = original + step;
    const double plus = objective(probe, gt, cfg).objective;
    x[c] = original - step;
    const double minus = objective(probe, gt, cfg).objective;
    x[c] = original;

    const double numeric = (plus - minus) / (2.0 * step);
    const double analytic = base.gradient[pixel][c] * base.objective_scale();
    out.max_abs_error = std::max(out.max_abs_error, std::abs(numeric - analytic));
    max_numeric = std::max(max_numeric, std::abs(numeric));
  }
  out.max_relative_error = max_numeric > 0.0 ? out.max_abs_error / max_numeric : out.max_abs_error;
  return out;
}

}  // namespace hsr
