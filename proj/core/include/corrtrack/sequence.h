#pragma once

#include <string>
#include <vector>

#include "corrtrack/camera.h"
#include "corrtrack/image.h"
#include "corrtrack/pose.h"

namespace corrtrack {

/// An ordered image sequence with per-frame ground-truth poses. Frames are
/// either held in memory or referenced by file path and loaded on access.
struct Sequence {
  std::vector<std::string> frame_paths;
  std::vector<ImageRGB> images;  // used when frame_paths is empty
  std::vector<Pose> gt_poses;
  Intrinsics intrinsics;

  std::size_t size() const {
    return frame_paths.empty() ? images.size() : frame_paths.size();
  }
  /// Frame k, loading from disk when file-backed. Throws on load failure.
  ImageRGB frame(std::size_t k) const;
};

/// Pose CSV: one row per frame, `frame,r11,...,r33,tx,ty,tz` with the
/// rotation row-major and the translation in meters.
void save_poses_csv(const std::string &path, const std::vector<Pose> &poses);
std::vector<Pose> load_poses_csv(const std::string &path);

/// Plain-text calibration: `fx fy px py width height` on one line.
void save_intrinsics(const std::string &path, const Intrinsics &intrinsics);
Intrinsics load_intrinsics(const std::string &path);

/// Loads a sequence directory as written by the synthetic generator:
/// frameNNNN.png images, calibration.txt, and optionally gt_poses.csv.
Sequence load_sequence_dir(const std::string &dir);

}  // namespace corrtrack
