#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string_view>

#include "hsr/error.hpp"
#include "hsr/evaluation.hpp"
#include "hsr/fit.hpp"
#include "hsr/image_io.hpp"
#include "hsr/landscape.hpp"
#include "hsr/losses.hpp"
#include "hsr/parallel.hpp"
#include "hsr/projection.hpp"
#include "hsr/relighting.hpp"
#include "hsr/synthetic.hpp"
#include "report.hpp"

namespace hsr::cli {

namespace {

constexpr int kDegDecimals = 4;
constexpr int kCoeffDecimals = 6;
constexpr std::array<std::string_view, kShCount> kShNames = {"L00", "L1m1", "L10", "L11", "L2m2",
                                                             "L2m1", "L20", "L21", "L22"};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return kUsage;
    case ErrorCode::kDivergence:
    case ErrorCode::kDegenerateCorrespondences: return kNumericalError;
    default: return kDataError;
  }
}

Vector3 parse_vector(const std::string& text) {
  std::array<double, 3> v{};
  std::istringstream in(text);
  char comma = 0;
  if (!(in >> v[0] >> comma >> v[1] >> comma >> v[2]) || !in.eof()) {
    throw Error(ErrorCode::kInvalidArgument, "expected x,y,z but got '" + text + "'");
  }
  return {v[0], v[1], v[2]};
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0;
  int h = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || x != 'x' || !in.eof() || w <= 0 || h <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "expected WxH but got '" + text + "'");
  }
  return {w, h};
}

std::string threshold_key(double t) {
  std::ostringstream s;
  s << "coverage_" << t;
  return s.str();
}

void add_metrics(Report& r, const MetricsReport& m) {
  r.add_fixed("mean_deg", m.mean_deg, kDegDecimals);
  r.add_fixed("median_deg", m.median_deg, kDegDecimals);
  r.add_fixed("rmse_deg", m.rmse_deg, kDegDecimals);
  for (std::size_t i = 0; i < kCoverageThresholds.size(); ++i) {
    r.add_fixed(threshold_key(kCoverageThresholds[i]), m.coverage[i], kDegDecimals);
  }
  r.add_int("valid_pixels", static_cast<long long>(m.valid_pixel_count));
}

void add_rotation(Report& r, const Mat3& m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.add_fixed("r" + std::to_string(i) + std::to_string(j), m.m[static_cast<std::size_t>(3 * i + j)], kCoeffDecimals);
    }
  }
  const double c = std::clamp((m.m[0] + m.m[4] + m.m[8] - 1.0) / 2.0, -1.0, 1.0);
  r.add_fixed("rotation_deg", std::acos(c) * 180.0 / std::numbers::pi, kDegDecimals);
}

std::filesystem::path face_path(const std::string& stem, CubeFace f, const std::string& ext) {
  return stem + "_" + std::string(face_name(f)) + "." + ext;
}

PoleMaskRule parse_pole_rule(const std::string& s) {
  if (s == "latitude") return PoleMaskRule::kLatitude;
  if (s == "cube") return PoleMaskRule::kCubeFace;
  throw Error(ErrorCode::kInvalidArgument, "unknown pole rule '" + s + "'");
}

InitKind parse_init(const std::string& s) {
  if (s == "noisy") return InitKind::kNoisy;
  if (s == "antipodal") return InitKind::kAntipodal;
  throw Error(ErrorCode::kInvalidArgument, "unknown init '" + s + "'");
}

struct FitOptions {
  std::string gt;
  std::string loss = "quat";
  double alpha = kDefaultAlpha;
  double sigma = 20.0;
  int iters = 2000;
  std::uint64_t seed = kDefaultSeed;
  double step = kDefaultFitStep;
  std::string init = "noisy";
  std::string init_field;

  void bind(CLI::App* sub) {
    sub->add_option("--gt", gt, "Ground-truth normals (.pfm or .png)")->required();
    sub->add_option("--loss", loss, "quat, cos or l2")->capture_default_str();
    sub->add_option("--sigma", sigma, "Noise of the initialisation in degrees")->capture_default_str();
    sub->add_option("--iters", iters, "Iterations")->capture_default_str();
    sub->add_option("--seed", seed, "Noise seed")->capture_default_str();
    sub->add_option("--step", step, "Base step size")->capture_default_str();
    sub->add_option("--init", init, "noisy or antipodal")->capture_default_str();
    sub->add_option("--init-field", init_field, "Start from this field instead");
  }

  FitConfig config() const {
    FitConfig cfg;
    cfg.loss.kind = parse_loss_kind(loss);
    cfg.loss.alpha = alpha;
    cfg.sigma_deg = sigma;
    cfg.iterations = iters;
    cfg.seed = seed;
    cfg.step = step;
    cfg.init = parse_init(init);
    if (!init_field.empty()) {
      cfg.init = InitKind::kCustom;
      cfg.custom_init = read_normals(init_field);
    }
    return cfg;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normal-map losses, metrics and panorama tools"};
  app.name("hsr");
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = 0;
  bool json = false;
  app.add_option("--threads", threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", json, "Print the report as one JSON object");

  std::function<int()> action;
  Report report;

  // metrics
  std::string pred_path, gt_path, pole_rule = "latitude";
  bool pole = false, align_first = false;
  auto* metrics = app.add_subcommand("metrics", "Angular error metrics between two normal maps");
  metrics->add_option("--pred", pred_path)->required();
  metrics->add_option("--gt", gt_path)->required();
  metrics->add_flag("--pole-mask", pole, "Drop high-latitude pixels");
  metrics->add_option("--pole-rule", pole_rule, "latitude or cube")->capture_default_str();
  metrics->add_flag("--align", align_first, "Rotate the prediction onto gt first");
  metrics->callback([&] {
    action = [&] {
      NormalField pred = read_normals(pred_path);
      const NormalField gt = read_normals(gt_path);
      require_same_shape(pred, gt);
      if (align_first) pred = svd_align(pred, gt).aligned;
      std::optional<Mask> extra;
      if (pole) extra = pole_mask(gt.width(), gt.height(), parse_pole_rule(pole_rule));
      add_metrics(report, summarize(angular_error_map(pred, gt, extra)));
      return kOk;
    };
  });

  // align
  std::string out_path;
  auto* align = app.add_subcommand("align", "Kabsch rotation of pred onto gt");
  align->add_option("--pred", pred_path)->required();
  align->add_option("--gt", gt_path)->required();
  align->add_option("--out", out_path, "Write the aligned prediction");
  align->callback([&] {
    action = [&] {
      const NormalField pred = read_normals(pred_path);
      const NormalField gt = read_normals(gt_path);
      const Alignment a = svd_align(pred, gt);
      if (!out_path.empty()) write_normals(a.aligned, out_path);
      add_rotation(report, a.rotation);
      add_metrics(report, summarize(angular_error_map(a.aligned, gt)));
      return kOk;
    };
  });

  // cube / uncube
  std::string in_path, stem, ext = "pfm";
  int face_size = 0, width = 0, height = 0;
  bool color = false, no_rotate = false;
  auto* cube = app.add_subcommand("cube", "Equirectangular map to six cube faces");
  cube->add_option("--in", in_path)->required();
  cube->add_option("--out-stem", stem, "Faces go to <stem>_<face>.<ext>")->required();
  cube->add_option("--face-size", face_size, "Defaults to the input height");
  cube->add_option("--ext", ext, "pfm or png")->capture_default_str();
  cube->add_flag("--color", color, "Treat the input as a colour image");
  cube->callback([&] {
    action = [&] {
      if (color) {
        const FloatImage img = read_color(in_path);
        const CubemapImage faces = equirect_to_cubemap(img, face_size > 0 ? face_size : img.height());
        for (CubeFace f : kCubeFaces) write_color(faces.face(f), face_path(stem, f, ext));
        report.add_int("face_size", faces.face_size);
      } else {
        const NormalField field = read_normals(in_path);
        const CubemapNormals faces = equirect_to_cubemap(field, face_size > 0 ? face_size : field.height());
        for (CubeFace f : kCubeFaces) write_normals(faces.face(f), face_path(stem, f, ext));
        report.add_int("face_size", faces.face_size);
        for (CubeFace f : kCubeFaces) {
          report.add_int(std::string(face_name(f)) + "_valid", static_cast<long long>(faces.face(f).valid_count()));
        }
      }
      return kOk;
    };
  });

  auto* uncube = app.add_subcommand("uncube", "Six cube faces back to an equirectangular map");
  uncube->add_option("--stem", stem, "Faces are read from <stem>_<face>.<ext>")->required();
  uncube->add_option("--out", out_path)->required();
  uncube->add_option("--width", width, "Defaults to twice the face size");
  uncube->add_option("--height", height, "Defaults to the face size");
  uncube->add_option("--ext", ext, "pfm or png")->capture_default_str();
  uncube->add_flag("--color", color, "Faces are colour images");
  uncube->add_flag("--no-rotate", no_rotate, "Keep face-local normals (seams become visible)");
  uncube->callback([&] {
    action = [&] {
      auto dims = [&](int s) {
        const int h = height > 0 ? height : s;
        return std::pair{width > 0 ? width : 2 * h, h};
      };
      if (color) {
        CubemapImage faces;
        for (CubeFace f : kCubeFaces) faces.face(f) = read_color(face_path(stem, f, ext));
        faces.face_size = faces.face(CubeFace::kFront).width();
        const auto [w, h] = dims(faces.face_size);
        write_color(cubemap_to_equirect(faces, w, h), out_path);
        report.add_int("width", w);
        report.add_int("height", h);
      } else {
        CubemapNormals faces;
        for (CubeFace f : kCubeFaces) faces.face(f) = read_normals(face_path(stem, f, ext));
        faces.face_size = faces.face(CubeFace::kFront).width();
        const auto [w, h] = dims(faces.face_size);
        const NormalField field = cubemap_to_equirect(faces, w, h, !no_rotate);
        write_normals(field, out_path);
        report.add_int("width", w);
        report.add_int("height", h);
        report.add_int("valid_pixels", static_cast<long long>(field.valid_count()));
      }
      return kOk;
    };
  });

  // landscape / convexity
  std::string loss_name = "quat", ref_text = "0,0,1", size_text = "512x256", heatmap_path;
  auto* landscape = app.add_subcommand("landscape", "Loss of every sphere direction against a reference normal");
  landscape->add_option("--loss", loss_name, "quat, cos or l2")->capture_default_str();
  landscape->add_option("--ref", ref_text, "Reference normal x,y,z")->capture_default_str();
  landscape->add_option("--size", size_text, "Grid size WxH")->capture_default_str();
  landscape->add_option("--out", out_path, "Single-channel PFM")->required();
  landscape->add_option("--heatmap", heatmap_path, "Also write a gray PNG, darker is higher");
  landscape->callback([&] {
    action = [&] {
      const auto [w, h] = parse_size(size_text);
      const ScalarGrid grid = generate_landscape(parse_loss_kind(loss_name), normalize(parse_vector(ref_text)), w, h);
      write_pfm(scalar_grid_to_image(grid), out_path);
      if (!heatmap_path.empty()) write_png_gray(landscape_heatmap(grid), heatmap_path);
      const auto [lo, hi] = std::minmax_element(grid.data().begin(), grid.data().end());
      report.add_fixed("min", *lo, kCoeffDecimals);
      report.add_fixed("max", *hi, kCoeffDecimals);
      return kOk;
    };
  });

  auto* convexity = app.add_subcommand("convexity", "Slope report of the quaternion and cosine landscapes");
  convexity->add_option("--ref", ref_text, "Reference normal x,y,z")->capture_default_str();
  convexity->add_option("--size", size_text, "Grid size WxH")->capture_default_str();
  convexity->callback([&] {
    action = [&] {
      const auto [w, h] = parse_size(size_text);
      const UnitVector3 ref = normalize(parse_vector(ref_text));
      const ConvexityReport c = landscape_convexity_report(generate_landscape(LossKind::kQuaternion, ref, w, h),
                                                           generate_landscape(LossKind::kCosine, ref, w, h), ref);
      report.add_fixed("quat_min_slope_interior", c.quat_min_slope_interior, kCoeffDecimals);
      report.add_fixed("quat_min_slope_tail", c.quat_min_slope_tail, kCoeffDecimals);
      report.add_fixed("cos_min_slope_tail", c.cos_min_slope_tail, kCoeffDecimals);
      report.add_fixed("cos_max_slope_tail", c.cos_max_slope_tail, kCoeffDecimals);
      report.add("max_identity_error", Report::scientific(c.max_identity_error, 3));
      report.add_int("interior_segments", static_cast<long long>(c.interior_segments));
      report.add_int("tail_segments", static_cast<long long>(c.tail_segments));
      return kOk;
    };
  });

  // relight / shproject
  std::string albedo_path, normals_path, env_path;
  auto* relight_cmd = app.add_subcommand("relight", "Diffuse relighting under an HDR environment");
  relight_cmd->add_option("--albedo", albedo_path)->required();
  relight_cmd->add_option("--normals", normals_path)->required();
  relight_cmd->add_option("--env", env_path, "Equirectangular HDR PFM")->required();
  relight_cmd->add_option("--out", out_path)->required();
  relight_cmd->callback([&] {
    action = [&] {
      const FloatImage albedo = read_color(albedo_path);
      const NormalField normals = read_normals(normals_path);
      const ShCoefficients sh = project_env_to_sh(read_pfm(env_path));
      write_color(relight(albedo, normals, sh), out_path);
      report.add_int("relit_pixels", static_cast<long long>(normals.valid_count()));
      return kOk;
    };
  });

  auto* shproject = app.add_subcommand("shproject", "Nine SH coefficients per channel of an environment map");
  shproject->add_option("--env", env_path, "Equirectangular HDR PFM")->required();
  shproject->callback([&] {
    action = [&] {
      const ShCoefficients sh = project_env_to_sh(read_pfm(env_path));
      for (int k = 0; k < kShCount; ++k) {
        std::string rgb;
        for (std::size_t c = 0; c < 3; ++c) {
          rgb += (c ? " " : "") + Report::fixed(sh.rgb[c][static_cast<std::size_t>(k)], kCoeffDecimals);
        }
        report.add(std::string(kShNames[static_cast<std::size_t>(k)]), rgb);
      }
      return kOk;
    };
  });

  // fit / sweep
  FitOptions fit_opts;
  std::string trace_path;
  auto* fit = app.add_subcommand("fit", "Fit a normal field to gt by projected gradient descent");
  fit_opts.bind(fit);
  fit->add_option("--alpha", fit_opts.alpha, "Smoothness weight")->capture_default_str();
  fit->add_option("--out", out_path, "Write the fitted field");
  fit->add_option("--trace", trace_path, "Write iteration,objective CSV");
  fit->callback([&] {
    action = [&] {
      const NormalField gt = read_normals(fit_opts.gt);
      const FitConfig cfg = fit_opts.config();
      const FitResult result = fit_normals(gt, cfg);
      if (!out_path.empty()) write_normals(result.fitted, out_path);
      if (!trace_path.empty()) {
        std::ofstream csv(trace_path);
        if (!csv) throw Error(ErrorCode::kIo, "cannot write " + trace_path);
        csv << "iteration,objective\n";
        for (std::size_t i = 0; i < result.trace.objective.size(); ++i) {
          csv << i << ',' << Report::scientific(result.trace.objective[i], 12) << '\n';
        }
      }
      report.add_text("loss", std::string(to_string(cfg.loss.kind)));
      report.add_fixed("alpha", cfg.loss.alpha, kCoeffDecimals);
      report.add_int("seed", static_cast<long long>(cfg.seed));
      report.add_int("iterations", cfg.iterations);
      report.add_fixed("initial_objective", result.trace.objective.front(), kCoeffDecimals);
      report.add_fixed("final_objective", result.trace.objective.back(), kCoeffDecimals);
      add_metrics(report, result.trace.final_metrics);
      report.add_int("rejected_steps", result.trace.rejected_steps);
      return kOk;
    };
  });

  FitOptions sweep_opts;
  std::vector<double> alphas(kAlphaSweep.begin(), kAlphaSweep.end());
  auto* sweep = app.add_subcommand("sweep", "Fit once per smoothness weight");
  sweep_opts.bind(sweep);
  sweep->add_option("--alphas", alphas, "Smoothness weights")->delimiter(',');
  sweep->callback([&] {
    action = [&] {
      const NormalField gt = read_normals(sweep_opts.gt);
      for (const SweepRow& row : alpha_sweep(gt, alphas, sweep_opts.config())) {
        const std::string p = "alpha_" + Report::fixed(row.alpha, kDegDecimals) + "_";
        report.add_fixed(p + "objective", row.final_objective, kCoeffDecimals);
        report.add_fixed(p + "mean_deg", row.final_mean_deg, kDegDecimals);
        report.add_fixed(p + "smoothness", row.final_smoothness, kCoeffDecimals);
        report.add_fixed(p + "edge_mean_deg", row.edge_mean_deg, kDegDecimals);
      }
      return kOk;
    };
  });

  // encode / decode
  auto* encode = app.add_subcommand("encode", "Float normals to an 8-bit PNG");
  encode->add_option("--in", in_path)->required();
  encode->add_option("--out", out_path)->required();
  encode->callback([&] {
    action = [&] {
      const NormalField field = read_normals(in_path);
      const Rgb8Image png = encode_normal_png(field);
      write_png(png, out_path);
      const ErrorMap e = angular_error_map(decode_normal_png(png), field);
      const auto max_err = std::max_element(e.degrees.data().begin(), e.degrees.data().end());
      report.add_int("valid_pixels", static_cast<long long>(field.valid_count()));
      report.add_fixed("max_error_deg", max_err == e.degrees.data().end() ? 0.0 : *max_err, kDegDecimals);
      return kOk;
    };
  });

  auto* decode = app.add_subcommand("decode", "8-bit PNG normals to float PFM");
  decode->add_option("--in", in_path)->required();
  decode->add_option("--out", out_path)->required();
  decode->callback([&] {
    action = [&] {
      const NormalField field = decode_normal_png(read_png(in_path));
      write_normals(field, out_path);
      report.add_int("valid_pixels", static_cast<long long>(field.valid_count()));
      return kOk;
    };
  });

  // gradcheck
  double gc_alpha = 0.0, gc_step = 1e-6, tolerance = 1e-4;
  std::uint64_t gc_seed = kDefaultSeed;
  std::size_t samples = 300;
  std::string gc_size = "16x8";
  auto* gradcheck = app.add_subcommand("gradcheck", "Analytic gradient against central differences");
  gradcheck->add_option("--loss", loss_name, "quat, cos or l2")->capture_default_str();
  gradcheck->add_option("--alpha", gc_alpha, "Smoothness weight")->capture_default_str();
  gradcheck->add_option("--seed", gc_seed, "Field seed")->capture_default_str();
  gradcheck->add_option("--size", gc_size, "Field size WxH")->capture_default_str();
  gradcheck->add_option("--step", gc_step, "Finite-difference step")->capture_default_str();
  gradcheck->add_option("--samples", samples, "Sampled components")->capture_default_str();
  gradcheck->add_option("--tolerance", tolerance, "Maximum relative error")->capture_default_str();
  gradcheck->callback([&] {
    action = [&] {
      const auto [w, h] = parse_size(gc_size);
      const FieldPair fields = make_random_pair(w, h, gc_seed);
      LossConfig cfg;
      cfg.kind = parse_loss_kind(loss_name);
      cfg.alpha = gc_alpha;
      const GradientCheck c = finite_difference_check(fields.pred, fields.gt, cfg, gc_step, gc_seed, samples);
      report.add_text("loss", std::string(to_string(cfg.kind)));
      report.add_fixed("alpha", cfg.alpha, kCoeffDecimals);
      report.add_int("samples", static_cast<long long>(c.samples));
      report.add("max_relative_error", Report::scientific(c.max_relative_error, 3));
      report.add("max_abs_error", Report::scientific(c.max_abs_error, 3));
      if (!(c.max_relative_error < tolerance)) {
        err << "error: gradient check exceeded tolerance " << Report::scientific(tolerance, 1) << '\n';
        return kNumericalError;
      }
      return kOk;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    set_thread_count(threads);
    const int code = action();
    report.print(out, json);
    return code;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace hsr::cli
