#include "hsr/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hsr/parallel.hpp"
#include "hsr/random.hpp"

namespace hsr {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kDivergenceFactor = 10.0;
constexpr int kMaxHalvings = 40;
constexpr double kStepGrowth = 1.2;

// One descent step on masked-in pixels with per-pixel step sizes; other
// pixels are copied untouched.
void descend(const NormalField& from, const Grid<Vector3>& gradient, const Mask& mask, const ScalarGrid& steps,
             double scale, NormalField& to) {
  parallel_for_rows(from.height(), [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < from.width(); ++u) {
        if (!mask(u, v)) continue;
        const Vector3 moved = from.normal(u, v) - gradient(u, v) * (steps(u, v) * scale);
        if (norm(moved) > 1e-12) {
          to.set(u, v, normalize(moved));
        } else {
          to.normals()(u, v) = from.normal(u, v);
        }
      }
    }
  });
}

Vector3 tangent_part(const Vector3& g, const Vector3& n) { return g - n * dot(g, n); }

// A pixel whose tangent gradient flips direction has stepped over its local
// minimum: halve its step. Otherwise let it grow back towards `cap`.
void adapt_steps(const NormalField& prev, const Grid<Vector3>& prev_grad, const NormalField& cur,
                 const Grid<Vector3>& cur_grad, const Mask& mask, double cap, ScalarGrid& steps) {
  parallel_for_rows(cur.height(), [&](int v0, int v1) {
    for (int v = v0; v < v1; ++v) {
      for (int u = 0; u < cur.width(); ++u) {
        if (!mask(u, v)) continue;
        const double turn =
            dot(tangent_part(prev_grad(u, v), prev.normal(u, v)), tangent_part(cur_grad(u, v), cur.normal(u, v)));
        double& s = steps(u, v);
        s = turn < 0.0 ? 0.5 * s : std::min(cap, kStepGrowth * s);
      }
    }
  });
}

Vector3 tangent_direction(const Vector3& n, double angle) {
  const Vector3 helper = std::abs(n.x) < 0.9 ? Vector3{1, 0, 0} : Vector3{0, 1, 0};
  const Vector3 t1 = normalize(cross(n, helper));
  const Vector3 t2 = cross(n, t1);
  return t1 * std::cos(angle) + t2 * std::sin(angle);
}

}  // namespace

void FitConfig::validate() const {
  loss.validate();
  if (!(step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fit step must be positive");
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "fit needs at least one iteration");
  if (!(sigma_deg >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma must be non-negative");
  if (init == InitKind::kCustom && !custom_init) {
    throw Error(ErrorCode::kInvalidArgument, "custom initialisation requested without a field");
  }
}

NormalField perturb_normals(const NormalField& field, double sigma_deg, std::uint64_t seed) {
  const CounterRng rng(seed);
  const double sigma = sigma_deg * kDegToRad;
  NormalField out = field;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!field.mask()[i]) continue;
    const Vector3& n = field.normals()[i];
    const double angle = std::abs(sigma * rng.normal(2 * i));
    const double azimuth = 2.0 * std::numbers::pi * rng.uniform(4 * i + 2);
    const Vector3 axis_dir = tangent_direction(n, azimuth);
    // Rotating within the plane spanned by n and a tangent keeps the
    // deviation angle equal to `angle`.
    out.normals()[i] = normalize(n * std::cos(angle) + axis_dir * std::sin(angle)).vec();
  }
  return out;
}

NormalField make_initialization(const NormalField& gt, const FitConfig& cfg) {
  switch (cfg.init) {
    case InitKind::kNoisy: return perturb_normals(gt, cfg.sigma_deg, cfg.seed);
    case InitKind::kAntipodal: {
      NormalField flipped = gt;
      for (std::size_t i = 0; i < flipped.size(); ++i) {
        if (flipped.mask()[i]) flipped.normals()[i] = -flipped.normals()[i];
      }
      return perturb_normals(flipped, cfg.sigma_deg, cfg.seed);
    }
    case InitKind::kCustom:
      if (!cfg.custom_init) throw Error(ErrorCode::kInvalidArgument, "missing custom initialisation");
      require_same_shape(*cfg.custom_init, gt);
      return *cfg.custom_init;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown init kind");
}

FitResult fit_normals(const NormalField& gt, const FitConfig& cfg) {
  cfg.validate();
  if (gt.valid_count() == 0) throw Error(ErrorCode::kEmptyMask, "ground truth has no valid pixels");

  FitResult result;
  NormalField pred = make_initialization(gt, cfg);
  require_same_shape(pred, gt);
  const Mask mask = intersect(pred.mask(), gt.mask());

  LossReport current = objective(pred, gt, cfg.loss);
  const double initial = current.objective;
  FitTrace& trace = result.trace;
  trace.seed = cfg.seed;
  trace.objective.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  trace.objective.push_back(initial);

  ScalarGrid steps(gt.width(), gt.height(), cfg.step);
  double scale = 1.0;
  NormalField candidate = pred;
  bool stalled = false;
  for (int it = 0; it < cfg.iterations; ++it) {
    // Once no step size lowers the objective the iterate is fixed; the trace
    // is padded with its value.
    if (stalled) {
      trace.objective.push_back(current.objective);
      continue;
    }
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxHalvings; ++attempt) {
      descend(pred, current.gradient, mask, steps, scale, candidate);
      LossReport next = objective(candidate, gt, cfg.loss);
      if (!cfg.step_halving || next.objective <= current.objective) {
        if (cfg.step_halving) adapt_steps(pred, current.gradient, candidate, next.gradient, mask, cfg.step, steps);
        std::swap(pred, candidate);
        current = std::move(next);
        accepted = true;
        break;
      }
      ++trace.rejected_steps;
      scale *= 0.5;
    }
    if (!accepted) {
      candidate = pred;
      stalled = true;
    }
    // The global halving is folded back into the per-pixel steps so it stays
    // permanent for this pixel set while letting individual pixels recover.
    if (scale != 1.0) {
      for (double& s : steps.data()) s *= scale;
      scale = 1.0;
    }
    if (!std::isfinite(current.objective) || current.objective > kDivergenceFactor * initial) {
      throw Error(ErrorCode::kDivergence, "objective grew from " + std::to_string(initial) + " to " +
                                              std::to_string(current.objective) + " at iteration " +
                                              std::to_string(it + 1));
    }
    trace.objective.push_back(current.objective);
  }

  trace.final_step = *std::max_element(steps.data().begin(), steps.data().end());
  trace.final_metrics = summarize(angular_error_map(pred, gt));
  result.fitted = std::move(pred);
  return result;
}

Mask edge_pixels(const NormalField& gt, double threshold_deg) {
  const double threshold = threshold_deg * kDegToRad;
  Mask edges(gt.width(), gt.height(), 0);
  constexpr int du[4] = {1, -1, 0, 0};
  constexpr int dv[4] = {0, 0, 1, -1};
  for (int v = 0; v < gt.height(); ++v) {
    for (int u = 0; u < gt.width(); ++u) {
      if (!gt.valid(u, v)) continue;
      for (int k = 0; k < 4; ++k) {
        const int nu = u + du[k];
        const int nv = v + dv[k];
        if (!gt.normals().contains(nu, nv) || !gt.valid(nu, nv)) continue;
        if (angular_difference(gt.normal(u, v), gt.normal(nu, nv)) > threshold) {
          edges(u, v) = 1;
          break;
        }
      }
    }
  }
  return edges;
}

std::vector<SweepRow> alpha_sweep(const NormalField& gt, std::span<const double> alphas, const FitConfig& base) {
  const Mask edges = edge_pixels(gt);
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    FitConfig cfg = base;
    cfg.loss.alpha = alpha;
    const FitResult fit = fit_normals(gt, cfg);
    SweepRow row;
    row.alpha = alpha;
    row.final_objective = fit.trace.objective.back();
    row.final_mean_deg = fit.trace.final_metrics.mean_deg;
    NormalField masked = fit.fitted;
    masked.mask() = intersect(masked.mask(), gt.mask());
    row.final_smoothness = smoothness(masked).objective;
    const ErrorMap edge_errors = angular_error_map(fit.fitted, gt, edges);
    row.edge_mean_deg = summarize(edge_errors).mean_deg;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hsr
