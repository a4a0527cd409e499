#include "corrtrack/color_histograms.h"

#include <cstring>
#include <fstream>

namespace corrtrack {

void ColorHistograms::update(const std::vector<double> &observed_fg,
                             const std::vector<double> &observed_bg) {
  if (observed_fg.size() != foreground_.size() ||
      observed_bg.size() != background_.size())
    throw Error{"ColorHistograms::update: bin count mismatch"};
  if (!initialized_) {
    foreground_ = observed_fg;
    background_ = observed_bg;
    initialized_ = true;
    return;
  }
  for (int i = 0; i < kBinCount; ++i) {
    foreground_[i] = learning_rate_fg_ * observed_fg[i] +
                     (1.0 - learning_rate_fg_) * foreground_[i];
    background_[i] = learning_rate_bg_ * observed_bg[i] +
                     (1.0 - learning_rate_bg_) * background_[i];
  }
}

void ColorHistograms::reset() {
  initialized_ = false;
  std::fill(foreground_.begin(), foreground_.end(), 0.0);
  std::fill(background_.begin(), background_.end(), 0.0);
}

namespace {
constexpr char kHistMagic[4] = {'C', 'H', 'S', 'T'};
}

void ColorHistograms::save(const std::string &path) const {
  std::ofstream file{path, std::ios::binary};
  if (!file) throw Error{"ColorHistograms::save: cannot open " + path};
  file.write(kHistMagic, sizeof(kHistMagic));
  const std::uint32_t bins = kBinCount;
  file.write(reinterpret_cast<const char *>(&bins), sizeof(bins));
  const float lr_fg = static_cast<float>(learning_rate_fg_);
  const float lr_bg = static_cast<float>(learning_rate_bg_);
  file.write(reinterpret_cast<const char *>(&lr_fg), sizeof(lr_fg));
  file.write(reinterpret_cast<const char *>(&lr_bg), sizeof(lr_bg));
  auto write_array = [&](const std::vector<double> &values) {
    for (double v : values) {
      const float f = static_cast<float>(v);
      file.write(reinterpret_cast<const char *>(&f), sizeof(f));
    }
  };
  write_array(foreground_);
  write_array(background_);
  if (!file) throw Error{"ColorHistograms::save: write failed for " + path};
}

ColorHistograms ColorHistograms::load(const std::string &path) {
  std::ifstream file{path, std::ios::binary};
  if (!file) throw Error{"ColorHistograms::load: cannot open " + path};
  char magic[4] = {};
  file.read(magic, sizeof(magic));
  if (!file || std::memcmp(magic, kHistMagic, sizeof(kHistMagic)) != 0)
    throw Error{"ColorHistograms::load: bad magic in " + path};
  std::uint32_t bins = 0;
  file.read(reinterpret_cast<char *>(&bins), sizeof(bins));
  if (bins != kBinCount)
    throw Error{"ColorHistograms::load: unexpected bin count in " + path};
  float lr_fg = 0.0f, lr_bg = 0.0f;
  file.read(reinterpret_cast<char *>(&lr_fg), sizeof(lr_fg));
  file.read(reinterpret_cast<char *>(&lr_bg), sizeof(lr_bg));
  ColorHistograms histograms{lr_fg, lr_bg};
  auto read_array = [&](std::vector<double> &values) {
    for (double &v : values) {
      float f = 0.0f;
      file.read(reinterpret_cast<char *>(&f), sizeof(f));
      v = f;
    }
  };
  read_array(histograms.foreground_);
  read_array(histograms.background_);
  if (!file) throw Error{"ColorHistograms::load: truncated file " + path};
  histograms.initialized_ = true;
  return histograms;
}

ObservedHistograms accumulate_from_pose(const ImageRGB &image,
                                        const SparseViewpointModel &model,
                                        const Pose &pose,
                                        const Intrinsics &intrinsics,
                                        const HistogramSamplingConfig &config) {
  const View &view = model.views[closest_view(model, pose)];

  std::vector<double> fg(ColorHistograms::kBinCount, 0.0);
  std::vector<double> bg(ColorHistograms::kBinCount, 0.0);
  double fg_total = 0.0;
  double bg_total = 0.0;

  for (std::size_t i = 0; i < view.points.size(); ++i) {
    const Vector3d camera_point = pose * view.points[i];
    if (camera_point.z() <= 0.0) continue;
    const Vector2d center = project(intrinsics, camera_point);
    if (center.x() < 0.0 || center.x() > intrinsics.width - 1 ||
        center.y() < 0.0 || center.y() > intrinsics.height - 1)
      continue;
    Vector2d normal = (pose.rotation * view.normals[i]).head<2>();
    const double norm = normal.norm();
    if (norm < 1e-12) continue;
    normal /= norm;

    // Pixels per meter along the normal direction at this depth.
    const double focal_along_normal =
        1.0 / std::hypot(normal.x() / intrinsics.fx,
                         normal.y() / intrinsics.fy);
    const double pixels_per_meter = focal_along_normal / camera_point.z();
    const double fg_px = view.foreground_dist[i] * pixels_per_meter;
    const double bg_px = view.background_dist[i] * pixels_per_meter;

    // Samples sit half a pixel past the offset so that the pixel under the
    // (sub-pixel) contour point is always skipped.
    auto sample = [&](double direction, double max_run,
                      std::vector<double> &histogram, double &total) {
      for (int j = 0; j < config.max_px; ++j) {
        const double t = config.offset_px + 0.5 + static_cast<double>(j);
        if (t > max_run) break;
        const Vector2d pos = center + direction * t * normal;
        const int x = round_to_pixel(pos.x());
        const int y = round_to_pixel(pos.y());
        if (!image.contains(x, y)) break;
        histogram[ColorHistograms::flat_bin(image.at(x, y))] += 1.0;
        total += 1.0;
      }
    };
    // The stored run lengths are measured from the contour pixel, which sits
    // about half a pixel inside the stored boundary point.
    sample(-1.0, fg_px - 1.0, fg, fg_total);
    sample(+1.0, bg_px, bg, bg_total);
  }

  if (fg_total == 0.0 || bg_total == 0.0)
    throw Error{"accumulate_from_pose: histogram starved"};
  for (double &v : fg) v /= fg_total;
  for (double &v : bg) v /= bg_total;
  return {std::move(fg), std::move(bg)};
}

}  // namespace corrtrack
