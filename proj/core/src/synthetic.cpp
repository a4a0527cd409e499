#include "corrtrack/synthetic.h"

#include <filesystem>
#include <iostream>
#include <random>

#include "corrtrack/png_io.h"
#include "corrtrack/rasterizer.h"

namespace corrtrack {

std::vector<Color> make_face_colors(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng{seed};
  std::vector<Color> colors(count);
  for (auto &color : colors) {
    // Saturated palette: one dominant channel per face.
    const std::uint32_t hue = rng() % 6;
    const auto high = static_cast<std::uint8_t>(160 + rng() % 96);
    const auto low = static_cast<std::uint8_t>(rng() % 96);
    const auto mid = static_cast<std::uint8_t>(rng() % 160);
    switch (hue) {
      case 0: color = {high, low, mid}; break;
      case 1: color = {high, mid, low}; break;
      case 2: color = {low, high, mid}; break;
      case 3: color = {mid, high, low}; break;
      case 4: color = {low, mid, high}; break;
      default: color = {mid, low, high}; break;
    }
  }
  return colors;
}

ImageRGB make_clutter_background(int width, int height, std::uint32_t seed) {
  std::mt19937 rng{seed};
  ImageRGB image{width, height};
  // Base gradient.
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      image.at(x, y) = {static_cast<std::uint8_t>(40 + 120 * x / width),
                        static_cast<std::uint8_t>(60 + 100 * y / height),
                        static_cast<std::uint8_t>(90)};
  // Random rectangles and ellipses.
  const int shapes = 150;
  for (int s = 0; s < shapes; ++s) {
    const int cx = static_cast<int>(rng() % width);
    const int cy = static_cast<int>(rng() % height);
    const int rx = 4 + static_cast<int>(rng() % (width / 8));
    const int ry = 4 + static_cast<int>(rng() % (height / 8));
    const Color color{static_cast<std::uint8_t>(rng() % 256),
                      static_cast<std::uint8_t>(rng() % 256),
                      static_cast<std::uint8_t>(rng() % 256)};
    const bool ellipse = rng() % 2 == 0;
    for (int y = std::max(0, cy - ry); y <= std::min(height - 1, cy + ry);
         ++y) {
      for (int x = std::max(0, cx - rx); x <= std::min(width - 1, cx + rx);
           ++x) {
        if (ellipse) {
          const double dx = static_cast<double>(x - cx) / rx;
          const double dy = static_cast<double>(y - cy) / ry;
          if (dx * dx + dy * dy > 1.0) continue;
        }
        image.at(x, y) = color;
      }
    }
  }
  // Speckle noise.
  for (auto &pixel : image.data()) {
    const int noise = static_cast<int>(rng() % 31) - 15;
    auto clamp8 = [](int v) {
      return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    };
    pixel = {clamp8(pixel.r + noise), clamp8(pixel.g + noise),
             clamp8(pixel.b + noise)};
  }
  return image;
}

namespace {

// 2x2 supersampled composition: renders at twice the resolution and box
// filters, approximating the soft silhouette edges of real imagery.
constexpr int kSupersample = 2;

Intrinsics supersampled(const Intrinsics &intrinsics) {
  Intrinsics fine = intrinsics;
  fine.fx *= kSupersample;
  fine.fy *= kSupersample;
  fine.px = kSupersample * intrinsics.px + 0.5 * (kSupersample - 1);
  fine.py = kSupersample * intrinsics.py + 0.5 * (kSupersample - 1);
  fine.width = kSupersample * intrinsics.width;
  fine.height = kSupersample * intrinsics.height;
  return fine;
}

ImageRGB downsample_composite(
    const std::vector<IndexedRender> &renders,
    const std::vector<const std::vector<Color> *> &colors,
    const Intrinsics &intrinsics, const ImageRGB &background) {
  ImageRGB image = background;
  for (int y = 0; y < intrinsics.height; ++y) {
    for (int x = 0; x < intrinsics.width; ++x) {
      int r = 0, g = 0, b = 0;
      for (int sy = 0; sy < kSupersample; ++sy) {
        for (int sx = 0; sx < kSupersample; ++sx) {
          const int fx = kSupersample * x + sx;
          const int fy = kSupersample * y + sy;
          Color sample = background.at(x, y);
          float depth = 0.0f;
          for (std::size_t i = 0; i < renders.size(); ++i) {
            const float z = renders[i].depth.at(fx, fy);
            if (z <= 0.0f) continue;
            if (depth == 0.0f || z < depth) {
              depth = z;
              sample = (*colors[i])[renders[i].triangle_index.at(fx, fy)];
            }
          }
          r += sample.r;
          g += sample.g;
          b += sample.b;
        }
      }
      constexpr int samples = kSupersample * kSupersample;
      image.at(x, y) = {static_cast<std::uint8_t>(r / samples),
                        static_cast<std::uint8_t>(g / samples),
                        static_cast<std::uint8_t>(b / samples)};
    }
  }
  return image;
}

}  // namespace

ImageRGB render_over_background(const TriangleMesh &mesh,
                                const std::vector<Color> &face_colors,
                                const Pose &pose, const Intrinsics &intrinsics,
                                const ImageRGB &background) {
  if (background.width() != intrinsics.width ||
      background.height() != intrinsics.height)
    throw Error{"render_over_background: background size mismatch"};
  if (face_colors.size() < mesh.triangles.size())
    throw Error{"render_over_background: missing face colors"};
  const IndexedRender render =
      render_indexed(mesh, pose, supersampled(intrinsics));
  return downsample_composite({render}, {&face_colors}, intrinsics,
                              background);
}

ImageRGB render_scene_over_background(
    const std::vector<SceneRenderObject> &objects,
    const Intrinsics &intrinsics, const ImageRGB &background) {
  if (background.width() != intrinsics.width ||
      background.height() != intrinsics.height)
    throw Error{"render_scene_over_background: background size mismatch"};
  std::vector<IndexedRender> renders;
  std::vector<const std::vector<Color> *> colors;
  renders.reserve(objects.size());
  for (const SceneRenderObject &object : objects) {
    if (object.face_colors->size() < object.mesh->triangles.size())
      throw Error{"render_scene_over_background: missing face colors"};
    renders.push_back(
        render_indexed(*object.mesh, object.pose, supersampled(intrinsics)));
    colors.push_back(object.face_colors);
  }
  return downsample_composite(renders, colors, intrinsics, background);
}

std::vector<Pose> make_trajectory(const Pose &start, std::size_t frames,
                                  const MotionSpec &motion) {
  std::vector<Pose> poses(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    const double rotation_phase =
        2.0 * M_PI * static_cast<double>(k) / motion.rotation_period;
    const double angle =
        motion.rotation_amplitude_rad * std::sin(rotation_phase);
    const double phase =
        2.0 * M_PI * static_cast<double>(k) / motion.translation_period;
    Pose pose;
    pose.rotation = start.rotation * exp_map(motion.rotation_axis * angle);
    pose.translation =
        start.translation +
        Vector3d{motion.translation_amplitude.x() * std::sin(phase),
                 motion.translation_amplitude.y() * std::sin(2.0 * phase),
                 motion.translation_amplitude.z() *
                     (std::cos(phase) - 1.0)};
    poses[k] = pose;
  }
  return poses;
}

void apply_imaging(ImageRGB &image, const ImagingConfig &imaging,
                   std::uint32_t seed) {
  auto clamp8 = [](int v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
  };
  for (int pass = 0; pass < imaging.blur_passes; ++pass) {
    ImageRGB tmp = image;
    for (int y = 0; y < image.height(); ++y)
      for (int x = 1; x + 1 < image.width(); ++x) {
        const Color a = image.at(x - 1, y);
        const Color b = image.at(x, y);
        const Color c = image.at(x + 1, y);
        tmp.at(x, y) = {clamp8((a.r + 2 * b.r + c.r) / 4),
                        clamp8((a.g + 2 * b.g + c.g) / 4),
                        clamp8((a.b + 2 * b.b + c.b) / 4)};
      }
    for (int y = 1; y + 1 < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x) {
        const Color a = tmp.at(x, y - 1);
        const Color b = tmp.at(x, y);
        const Color c = tmp.at(x, y + 1);
        image.at(x, y) = {clamp8((a.r + 2 * b.r + c.r) / 4),
                          clamp8((a.g + 2 * b.g + c.g) / 4),
                          clamp8((a.b + 2 * b.b + c.b) / 4)};
      }
  }
  if (imaging.noise_stddev > 0.0) {
    std::mt19937 rng{seed};
    std::normal_distribution<double> noise{0.0, imaging.noise_stddev};
    for (Color &pixel : image.data()) {
      const int delta = static_cast<int>(std::lround(noise(rng)));
      pixel = {clamp8(pixel.r + delta), clamp8(pixel.g + delta),
               clamp8(pixel.b + delta)};
    }
  }
}

Sequence generate_synthetic_sequence(const TriangleMesh &mesh,
                                     const std::vector<Pose> &trajectory,
                                     const ImageRGB &background,
                                     const Intrinsics &intrinsics,
                                     std::uint32_t seed,
                                     const std::string &out_dir,
                                     const ImagingConfig &imaging) {
  const std::vector<Color> face_colors =
      make_face_colors(mesh.triangles.size(), seed);

  Sequence sequence;
  sequence.intrinsics = intrinsics;
  sequence.gt_poses = trajectory;

  const bool to_disk = !out_dir.empty();
  if (to_disk) std::filesystem::create_directories(out_dir);

  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const DepthImage depth = render_depth(mesh, trajectory[k], intrinsics);
    const SilhouetteMask mask = silhouette_of(depth);
    bool any = false;
    bool touches_border = false;
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, 0) || mask.at(x, mask.height() - 1))
        touches_border = true;
    }
    for (int y = 0; y < mask.height(); ++y) {
      if (mask.at(0, y) || mask.at(mask.width() - 1, y)) touches_border = true;
    }
    for (const auto &v : mask.data())
      if (v) {
        any = true;
        break;
      }
    if (!any || touches_border)
      throw Error{"generate_synthetic_sequence: object leaves frame " +
                  std::to_string(k)};

    ImageRGB frame = render_over_background(mesh, face_colors, trajectory[k],
                                            intrinsics, background);
    apply_imaging(frame, imaging, seed + 101 * static_cast<std::uint32_t>(k));

    if (to_disk) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame%04zu.png", k);
      const std::string path = out_dir + "/" + name;
      write_png(path, frame);
      sequence.frame_paths.push_back(path);
    } else {
      sequence.images.push_back(std::move(frame));
    }
  }
  if (to_disk) {
    save_poses_csv(out_dir + "/gt_poses.csv", trajectory);
    save_intrinsics(out_dir + "/calibration.txt", intrinsics);
  }
  return sequence;
}

std::size_t emit_overlay(const ImageRGB &image, const TriangleMesh &mesh,
                         const Pose &pose, const Intrinsics &intrinsics,
                         const std::string &out_path) {
  Intrinsics render_intrinsics = intrinsics;
  render_intrinsics.width = image.width();
  render_intrinsics.height = image.height();
  const DepthImage depth = render_depth(mesh, pose, render_intrinsics);
  const SilhouetteMask mask = silhouette_of(depth);

  ImageRGB overlay = image;
  std::size_t drawn = 0;
  const bool empty =
      std::none_of(mask.data().begin(), mask.data().end(),
                   [](std::uint8_t v) { return v != 0; });
  if (empty) {
    std::cerr << "emit_overlay: pose renders off-screen, writing image copy\n";
  } else {
    for (const ContourPoint &p : extract_contour(mask)) {
      overlay.at(round_to_pixel(p.point.x()), round_to_pixel(p.point.y())) =
          Color{0, 255, 0};
      ++drawn;
    }
  }
  write_png(out_path, overlay);
  return drawn;
}

}  // namespace corrtrack
