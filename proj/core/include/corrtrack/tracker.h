#pragma once

#include <optional>
#include <vector>

#include "corrtrack/color_histograms.h"
#include "corrtrack/correspondence_line.h"
#include "corrtrack/mesh.h"
#include "corrtrack/optimizer.h"
#include "corrtrack/rasterizer.h"
#include "corrtrack/viewpoint_model.h"

namespace corrtrack {

struct TrackerConfig {
  /// Segment sizes per outer iteration; the first iterations cover a large
  /// area at low resolution, later ones refine at pixel resolution.
  std::vector<int> scales = {5, 2, 2, 1, 1, 1, 1};
  int inner_iterations = 2;  // Newton iterations per outer iteration

  /// Step function defaults for clutter-heavy imagery; real-camera imagery
  /// works better with amplitude 0.42 and slope 0.5.
  StepFunctionParams step_params{0.36, 0.0};
  OptimizerConfig optimizer;

  int support_size = 12;
  int min_continuous_distance_segments = 6;
  int min_valid_lines = 10;

  HistogramSamplingConfig histogram_sampling;
  double learning_rate_fg = 0.2;
  double learning_rate_bg = 0.2;

  bool use_occlusion_masks = false;
  int occlusion_downscale = 4;
  int occlusion_radius = 4;

  int outer_iterations() const { return static_cast<int>(scales.size()); }
};

/// Per-object optimizer overrides (e.g. a larger rotational regularization
/// for rotationally symmetric geometry).
struct ObjectOverrides {
  std::optional<double> lambda_r;
  std::optional<double> lambda_t;
};

/// State of one tracked object. Mesh and viewpoint model are shared,
/// immutable references; pose and histograms evolve per frame.
struct TrackedObject {
  const TriangleMesh *mesh = nullptr;
  const SparseViewpointModel *model = nullptr;
  ColorHistograms histograms;
  Pose pose;
  int id = 0;
  ObjectOverrides overrides;
  /// Objects with optimize = false keep their pose but still occupy the
  /// occlusion mask (known static occluders).
  bool optimize = true;
};

struct IterationDiagnostics {
  int scale = 0;
  int valid_lines = 0;
  double mean_abs_distance = 0.0;  // mean |mu| over valid lines, segments
};

struct StepResult {
  Pose pose;
  bool optimizer_failed = false;   // an outer iteration had no usable lines
  bool low_line_count = false;     // fewer than min_valid_lines somewhere
  bool histogram_starved = false;  // adaptation skipped for this frame
  std::vector<IterationDiagnostics> iterations;
};

/// Region-based pose tracker over sparse correspondence lines. One instance
/// drives a group of objects observed by a single camera; a group is driven
/// by one thread per frame, while independent groups may run concurrently.
class Tracker {
 public:
  Tracker(const TrackerConfig &config, const Intrinsics &intrinsics);

  const TrackerConfig &config() const { return config_; }
  const Intrinsics &intrinsics() const { return intrinsics_; }

  /// Sets the pose and initializes the color histograms from the image
  /// (unblended). Throws when the object projects outside the image.
  void initialize(TrackedObject &object, const ImageRGB &image,
                  const Pose &initial_pose) const;

  /// Runsone tracking step for every object: per outer iteration an optional
  /// occlusion-mask render, closest-view lookup, correspondence-line setup,
  /// distribution evaluation, and two regularized Newton iterations (global
  /// then local); finally the histogram update.
  std::vector<StepResult> track_step(std::vector<TrackedObject> &objects,
                                     const ImageRGB &image) const;

  /// Correspondence lines for one view at the given scale. Lines are dropped
  /// when the center projects outside the image, the continuous distances
  /// fall below the configured threshold, or the occlusion mask hides the
  /// center.
  std::vector<CorrespondenceLine> define_lines(
      const TrackedObject &object, const View &view, int scale,
      const OcclusionMask *occlusion_mask = nullptr) const;

  /// Segments on each side of a line: enough to cover every support point
  /// with the full step-function span.
  int line_half_length() const { return half_length_; }

 private:
  OptimizerConfig optimizer_config_for(const TrackedObject &object) const;

  TrackerConfig config_;
  Intrinsics intrinsics_;
  StepFunctionTable step_table_;
  std::vector<double> support_;
  int half_length_;
};

}  // namespace corrtrack
