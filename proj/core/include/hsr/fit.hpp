#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hsr/evaluation.hpp"
#include "hsr/losses.hpp"
#include "hsr/normal_field.hpp"

namespace hsr {

inline constexpr std::uint64_t kDefaultSeed = 1337;
inline constexpr double kDefaultFitStep = 0.02;
// Smoothness weights of the ablation grid.
inline constexpr std::array<double, 6> kAlphaSweep = {0.5, 0.2, 0.1, 0.05, 0.025, 0.0125};

enum class InitKind {
  kNoisy,      // gt rotated by folded-normal(sigma) angles
  kAntipodal,  // -gt, then rotated the same way
  kCustom,
};

struct FitConfig {
  LossConfig loss;
  // Gradient step on the summed per-pixel objective, so the update of a pixel
  // does not scale with the number of pixels.
  double step = kDefaultFitStep;
  int iterations = 2000;
  InitKind init = InitKind::kNoisy;
  double sigma_deg = 20.0;
  std::optional<NormalField> custom_init;
  std::uint64_t seed = kDefaultSeed;
  // Reject steps that increase the objective and halve all step sizes. Each
  // pixel also halves its own step when its tangent gradient reverses, and
  // grows it by 1.2x (capped at `step`) otherwise.
  bool step_halving = true;

  void validate() const;
};

struct FitTrace {
  std::vector<double> objective;  // iterations + 1 entries, initial value first
  MetricsReport final_metrics;
  std::uint64_t seed = kDefaultSeed;
  double final_step = 0.0;  // largest per-pixel step at the end
  int rejected_steps = 0;
};

struct FitResult {
  NormalField fitted;
  FitTrace trace;
};

// Rotates every masked-in normal about a random tangent axis by
// |N(0, sigma)| degrees; the rotation angle equals the angular error.
NormalField perturb_normals(const NormalField& field, double sigma_deg, std::uint64_t seed);
NormalField make_initialization(const NormalField& gt, const FitConfig& cfg);

// Projected gradient descent: pred <- normalize(pred - step * grad) on
// masked-in pixels, with per-pixel steps. When no step lowers the objective
// the iterate is final and the remaining trace entries repeat its value.
// Throws kDivergence if the objective exceeds ten times its initial value.
FitResult fit_normals(const NormalField& gt, const FitConfig& cfg);

struct SweepRow {
  double alpha = 0.0;
  double final_objective = 0.0;
  double final_mean_deg = 0.0;
  double final_smoothness = 0.0;  // masked mean of the smoothness term
  double edge_mean_deg = 0.0;     // mean error over edge pixels of gt
};

// Pixels with a valid 4-neighbour whose gt normal differs by more than
// `threshold_deg`.
Mask edge_pixels(const NormalField& gt, double threshold_deg = 10.0);

std::vector<SweepRow> alpha_sweep(const NormalField& gt, std::span<const double> alphas, const FitConfig& base);

}  // namespace hsr
