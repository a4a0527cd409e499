#include "corrtrack/tracker.h"

#include <cmath>

namespace corrtrack {

Tracker::Tracker(const TrackerConfig &config, const Intrinsics &intrinsics)
    : config_{config},
      intrinsics_{intrinsics},
      step_table_{config.step_params},
      support_{make_support(config.support_size)} {
  if (config_.scales.empty()) throw Error{"Tracker: empty scale schedule"};
  for (int s : config_.scales)
    if (s < 1) throw Error{"Tracker: scales must be >= 1"};
  if (!intrinsics_.is_valid()) throw Error{"Tracker: invalid intrinsics"};
  half_length_ = static_cast<int>(
      std::lround(support_.back() + StepFunctionTable::kMaxArgument));
}

void Tracker::initialize(TrackedObject &object, const ImageRGB &image,
                         const Pose &initial_pose) const {
  if (!object.mesh || !object.model)
    throw Error{"Tracker::initialize: object without mesh or model"};
  object.pose = initial_pose;
  const ObservedHistograms observed = accumulate_from_pose(
      image, *object.model, object.pose, intrinsics_,
      config_.histogram_sampling);
  object.histograms =
      ColorHistograms{config_.learning_rate_fg, config_.learning_rate_bg};
  object.histograms.update(observed.foreground, observed.background);
}

std::vector<CorrespondenceLine> Tracker::define_lines(
    const TrackedObject &object, const View &view, int scale,
    const OcclusionMask *occlusion_mask) const {
  std::vector<CorrespondenceLine> lines;
  lines.reserve(view.points.size());
  for (std::size_t i = 0; i < view.points.size(); ++i) {
    const Vector3d camera_point = object.pose * view.points[i];
    if (camera_point.z() <= 0.0) continue;
    const Vector2d center = project(intrinsics_, camera_point);
    if (center.x() < 0.0 || center.x() > intrinsics_.width - 1 ||
        center.y() < 0.0 || center.y() > intrinsics_.height - 1)
      continue;
    Vector2d normal = (object.pose.rotation * view.normals[i]).head<2>();
    const double norm = normal.norm();
    if (norm < 1e-12) continue;
    normal /= norm;

    CorrespondenceLine line = setup_line(center, normal, scale, half_length_);

    // Continuous distances in segments; lines crossing a nearby second
    // transition violate the single-transition assumption and are dropped.
    const double focal_along_normal =
        1.0 / std::hypot(normal.x() / intrinsics_.fx,
                         normal.y() / intrinsics_.fy);
    const double segments_per_meter = focal_along_normal /
                                      camera_point.z() *
                                      line.major_component / scale;
    const double fg_segments = view.foreground_dist[i] * segments_per_meter;
    const double bg_segments = view.background_dist[i] * segments_per_meter;
    if (std::min(fg_segments, bg_segments) <
        config_.min_continuous_distance_segments)
      continue;

    if (occlusion_mask &&
        !occlusion_mask_visible(*occlusion_mask, center,
                                config_.occlusion_downscale, object.id))
      continue;

    line.model_point = view.points[i];
    line.depth_at_center = camera_point.z();
    lines.push_back(std::move(line));
  }
  return lines;
}

OptimizerConfig Tracker::optimizer_config_for(
    const TrackedObject &object) const {
  OptimizerConfig config = config_.optimizer;
  if (object.overrides.lambda_r) config.lambda_r = *object.overrides.lambda_r;
  if (object.overrides.lambda_t) config.lambda_t = *object.overrides.lambda_t;
  return config;
}

std::vector<StepResult> Tracker::track_step(
    std::vector<TrackedObject> &objects, const ImageRGB &image) const {
  std::vector<StepResult> results(objects.size());
  std::uint32_t seen_ids = 0;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!objects[i].mesh || !objects[i].model)
      throw Error{"Tracker::track_step: object without mesh or model"};
    if (objects[i].id < 0 || objects[i].id >= 32)
      throw Error{"Tracker::track_step: object id out of range"};
    const std::uint32_t bit = 1u << objects[i].id;
    if (seen_ids & bit)
      throw Error{"Tracker::track_step: duplicate object id"};
    seen_ids |= bit;
  }

  for (int outer = 0; outer < config_.outer_iterations(); ++outer) {
    const int scale = config_.scales[outer];

    std::optional<OcclusionMask> occlusion_mask;
    if (config_.use_occlusion_masks) {
      std::vector<SceneObject> scene;
      scene.reserve(objects.size());
      for (const TrackedObject &object : objects)
        scene.push_back({object.mesh, object.pose, object.id});
      occlusion_mask =
          render_occlusion_mask(scene, intrinsics_, config_.occlusion_downscale,
                                config_.occlusion_radius);
    }

    for (std::size_t i = 0; i < objects.size(); ++i) {
      TrackedObject &object = objects[i];
      if (!object.optimize) continue;
      StepResult &result = results[i];

      const View &view =
          object.model->views[closest_view(*object.model, object.pose)];
      std::vector<CorrespondenceLine> lines = define_lines(
          object, view, scale,
          occlusion_mask ? &*occlusion_mask : nullptr);

      std::vector<CorrespondenceLine> valid_lines;
      std::vector<PosteriorDistribution> distributions;
      valid_lines.reserve(lines.size());
      distributions.reserve(lines.size());
      double sum_abs_mean = 0.0;
      for (CorrespondenceLine &line : lines) {
        if (!evaluate_line(image, object.histograms, line)) continue;
        try {
          PosteriorDistribution distribution =
              posterior_distribution(line, step_table_, support_);
          sum_abs_mean += std::abs(distribution.mean);
          distributions.push_back(std::move(distribution));
          valid_lines.push_back(std::move(line));
        } catch (const Error &) {
          // degenerate distribution: line contributes nothing
        }
      }

      IterationDiagnostics diagnostics;
      diagnostics.scale = scale;
      diagnostics.valid_lines = static_cast<int>(valid_lines.size());
      diagnostics.mean_abs_distance =
          valid_lines.empty() ? 0.0
                              : sum_abs_mean / static_cast<double>(
                                                   valid_lines.size());
      result.iterations.push_back(diagnostics);
      if (static_cast<int>(valid_lines.size()) < config_.min_valid_lines)
        result.low_line_count = true;
      if (valid_lines.empty()) {
        result.optimizer_failed = true;
        continue;  // keep the previous pose for this outer iteration
      }

      const OptimizerConfig optimizer_config = optimizer_config_for(object);
      for (int inner = 0; inner < config_.inner_iterations; ++inner) {
        const OptimizationMode mode =
            inner == 0 ? OptimizationMode::kGlobal : OptimizationMode::kLocal;
        try {
          const NormalEquations equations =
              assemble(valid_lines, distributions, object.pose, intrinsics_,
                       mode, optimizer_config);
          object.pose =
              update_pose(object.pose, solve_step(equations, optimizer_config));
        } catch (const Error &) {
          result.optimizer_failed = true;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    TrackedObject &object = objects[i];
    results[i].pose = object.pose;
    if (!object.optimize) continue;
    try {
      const ObservedHistograms observed = accumulate_from_pose(
          image, *object.model, object.pose, intrinsics_,
          config_.histogram_sampling);
      object.histograms.update(observed.foreground, observed.background);
    } catch (const Error &) {
      results[i].histogram_starved = true;
    }
  }
  return results;
}

}  // namespace corrtrack
