#pragma once

#include <array>
#include <string>
#include <vector>

#include "corrtrack/camera.h"
#include "corrtrack/image.h"
#include "corrtrack/pose.h"
#include "corrtrack/viewpoint_model.h"

namespace corrtrack {

/// Foreground/background RGB statistics over 32x32x32 bins. Histograms are
/// stored normalized (each sums to 1 once initialized); likelihood lookups
/// feed the pixel-wise posteriors. Reads are safe concurrently; update()
/// requires exclusive access (one writer between frames).
class ColorHistograms {
 public:
  static constexpr int kBinsPerChannel = 32;
  static constexpr int kBinCount =
      kBinsPerChannel * kBinsPerChannel * kBinsPerChannel;

  ColorHistograms(double learning_rate_fg = 0.2, double learning_rate_bg = 0.2)
      : learning_rate_fg_{learning_rate_fg},
        learning_rate_bg_{learning_rate_bg},
        foreground_(kBinCount, 0.0),
        background_(kBinCount, 0.0) {}

  bool initialized() const { return initialized_; }
  double learning_rate_fg() const { return learning_rate_fg_; }
  double learning_rate_bg() const { return learning_rate_bg_; }

  double foreground_likelihood(const Color &color) const {
    return foreground_[flat_bin(color)];
  }
  double background_likelihood(const Color &color) const {
    return background_[flat_bin(color)];
  }

  const std::vector<double> &foreground() const { return foreground_; }
  const std::vector<double> &background() const { return background_; }

  /// Blends observed (normalized) histograms into the current estimate with
  /// the per-region learning rates. The first call adopts the observation
  /// unblended.
  void update(const std::vector<double> &observed_fg,
              const std::vector<double> &observed_bg);

  /// Resets to the uninitialized state.
  void reset();

  void save(const std::string &path) const;
  static ColorHistograms load(const std::string &path);

  /// Channel bin indices of an 8-bit color (8 values per bin).
  static std::array<int, 3> bin_of(const Color &color) {
    return {color.r / 8, color.g / 8, color.b / 8};
  }
  static int flat_bin(const Color &color) {
    return (color.r / 8) * kBinsPerChannel * kBinsPerChannel +
           (color.g / 8) * kBinsPerChannel + color.b / 8;
  }

 private:
  double learning_rate_fg_;
  double learning_rate_bg_;
  bool initialized_ = false;
  std::vector<double> foreground_;
  std::vector<double> background_;
};

struct HistogramSamplingConfig {
  int offset_px = 1;  // pixels skipped next to the contour
  int max_px = 18;    // pixels sampled per direction
};

/// Raw (normalized) fg/bg histograms observed along the projected contour
/// normals of the closest view. Pixels in the negative normal direction count
/// as foreground, positive as background; runs are capped by the view's
/// continuous distances. Throws "histogram starved" if either region
/// collects no pixels.
struct ObservedHistograms {
  std::vector<double> foreground;
  std::vector<double> background;
};
ObservedHistograms accumulate_from_pose(const ImageRGB &image,
                                        const SparseViewpointModel &model,
                                        const Pose &pose,
                                        const Intrinsics &intrinsics,
                                        const HistogramSamplingConfig &config =
                                            {});

}  // namespace corrtrack
