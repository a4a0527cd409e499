#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrtrack/mesh.h"
#include "corrtrack/sequence.h"

namespace corrtrack {

/// Deterministic per-face colors (seeded, saturated palette).
std::vector<Color> make_face_colors(std::size_t count, std::uint32_t seed);

/// Busy synthetic background: gradients, random rectangles and ellipses, and
/// speckle noise, all seeded.
ImageRGB make_clutter_background(int width, int height, std::uint32_t seed);

/// Renders the mesh with per-face colors over a background image.
ImageRGB render_over_background(const TriangleMesh &mesh,
                                const std::vector<Color> &face_colors,
                                const Pose &pose, const Intrinsics &intrinsics,
                                const ImageRGB &background);

/// Depth-composited multi-object render over a background (occlusion scenes).
struct SceneRenderObject {
  const TriangleMesh *mesh = nullptr;
  const std::vector<Color> *face_colors = nullptr;
  Pose pose;
};
ImageRGB render_scene_over_background(
    const std::vector<SceneRenderObject> &objects,
    const Intrinsics &intrinsics, const ImageRGB &background);

/// Smooth test trajectory: an oscillating attitude about a fixed axis
/// composed with sinusoidal translation around the start pose. Amplitudes
/// and periods control the per-frame motion magnitude.
struct MotionSpec {
  Vector3d rotation_axis = Vector3d{1.0, 0.7, 0.4}.normalized();
  double rotation_amplitude_rad = 0.0;
  double rotation_period = 100.0;        // frames
  Vector3d translation_amplitude = Vector3d::Zero();  // meters
  double translation_period = 120.0;     // frames
};
std::vector<Pose> make_trajectory(const Pose &start, std::size_t frames,
                                  const MotionSpec &motion);

/// Camera-like degradation applied to composited frames: box blur passes
/// (separable 1-2-1 kernel) and additive Gaussian intensity noise.
struct ImagingConfig {
  int blur_passes = 1;
  double noise_stddev = 1.5;  // gray levels
};

/// Renders one frame per pose over the background, antialiased, blurred, and
/// noised per the imaging config. With a non-empty out_dir, frames are
/// written as PNG together with a ground-truth CSV and the camera
/// calibration; otherwise the sequence stays in memory. Throws, naming the
/// frame, if the silhouette leaves the image.
Sequence generate_synthetic_sequence(const TriangleMesh &mesh,
                                     const std::vector<Pose> &trajectory,
                                     const ImageRGB &background,
                                     const Intrinsics &intrinsics,
                                     std::uint32_t seed,
                                     const std::string &out_dir = "",
                                     const ImagingConfig &imaging = {});

/// In-place camera degradation, deterministic for a fixed seed.
void apply_imaging(ImageRGB &image, const ImagingConfig &imaging,
                   std::uint32_t seed);

/// Draws the silhouette contour of the posed mesh onto the image and writes
/// it as PNG. An off-screen pose writes the unmodified image and warns on
/// stderr. Returns the number of contour pixels drawn.
std::size_t emit_overlay(const ImageRGB &image, const TriangleMesh &mesh,
                         const Pose &pose, const Intrinsics &intrinsics,
                         const std::string &out_path);

}  // namespace corrtrack
