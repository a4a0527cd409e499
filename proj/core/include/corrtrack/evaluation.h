#pragma once

#include <functional>
#include <string>
#include <vector>

#include "corrtrack/metrics.h"
#include "corrtrack/sequence.h"
#include "corrtrack/tracker.h"

namespace corrtrack {

struct EvalReport {
  std::vector<double> e_t;  // meters
  std::vector<double> e_r;  // radians
  std::vector<double> e_v;  // meters
  std::vector<bool> success;
  double success_rate = 0.0;  // percent over scored frames
  double auc = 0.0;           // in [0, 20]
  int reinit_count = 0;
  std::vector<Pose> estimated_poses;
};

struct SuccessThresholds {
  double translation = 0.05;               // meters
  double rotation = 5.0 * M_PI / 180.0;    // radians
};

/// Tracking protocol over a sequence with ground truth: initialize at the
/// frame-0 ground-truth pose, then per frame run one tracking step and score
/// it; on failure the tracker is re-initialized with that frame's ground
/// truth. Frames 1..end are scored.
EvalReport run_protocol(const Tracker &tracker, TrackedObject &object,
                        const Sequence &sequence,
                        const SuccessThresholds &thresholds = {});

/// Protocol core decoupled from the tracker: track_fn returns the pose
/// estimate for a frame, reinit_fn restores the tracker state from a
/// ground-truth pose after a failure.
using TrackFn = std::function<Pose(std::size_t frame, const ImageRGB &image)>;
using ReinitFn = std::function<void(std::size_t frame, const ImageRGB &image,
                                    const Pose &gt)>;
EvalReport run_protocol_with(const TrackFn &track_fn, const ReinitFn &reinit_fn,
                             const TriangleMesh &mesh, const Sequence &sequence,
                             const SuccessThresholds &thresholds = {});

/// RBOT-style dataset directory:
///   root/camera_calibration.txt        fx fy px py [width height]
///   root/poses_first.txt               per-frame "r11 ... r33 tx ty tz"
///   root/<object>/<object>.obj
///   root/<object>/frames/<sequence>NNNN.png
/// pose_scale converts the ground-truth translation unit to meters.
struct RbotSequence {
  Sequence sequence;
  std::string mesh_path;
};
bool rbot_dataset_present(const std::string &root);
std::vector<std::string> rbot_objects(const std::string &root);
RbotSequence load_rbot_sequence(const std::string &root,
                                const std::string &object,
                                const std::string &sequence_name,
                                double pose_scale = 0.001);

/// OPT-style dataset directory:
///   root/<object>/<object>.obj
///   root/<object>/<sequence>/frames/frameNNNN.png
///   root/<object>/<sequence>/gt_poses.csv
///   root/<object>/<sequence>/calibration.txt
bool opt_dataset_present(const std::string &root);
RbotSequence load_opt_sequence(const std::string &root,
                               const std::string &object,
                               const std::string &sequence_name);

}  // namespace corrtrack
