#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "corrtrack/camera.h"
#include "corrtrack/image.h"
#include "corrtrack/mesh.h"
#include "corrtrack/pose.h"

namespace corrtrack {

/// Z-buffered perspective rasterization of a mesh posed in front of the
/// camera. Pixels covered by no triangle have depth 0. Top-left fill
/// convention, perspective-correct depth, deterministic output.
DepthImage render_depth(const TriangleMesh &mesh, const Pose &pose,
                        const Intrinsics &intrinsics);

/// Depth plus the index of the front-most triangle per pixel (-1 = empty).
struct IndexedRender {
  DepthImage depth;
  Image<std::int32_t> triangle_index;
};
IndexedRender render_indexed(const TriangleMesh &mesh, const Pose &pose,
                             const Intrinsics &intrinsics);

/// 2D contour sample: pixel position and outward unit normal
/// (pointing from foreground toward background).
struct ContourPoint {
  Vector2d point;
  Vector2d normal;
};

/// Extracts contour pixels (foreground pixels with at least one background
/// 4-neighbor; pixels outside the image count as background) together with
/// outward normals estimated from a 5x5 neighborhood. Throws on empty masks.
std::vector<ContourPoint> extract_contour(const SilhouetteMask &mask);

/// Uninterrupted run lengths in pixels: foreground along -normal starting at
/// (and including) the given contour pixel, background along +normal starting
/// one step beyond it. Both runs are capped at the image border.
std::pair<double, double> continuous_distance(const SilhouetteMask &mask,
                                              const Vector2d &point,
                                              const Vector2d &normal);

struct SceneObject {
  const TriangleMesh *mesh = nullptr;
  Pose pose;
  int id = 0;  // bit position in the mask, in [0, 32)
};

/// Renders all objects at 1/downscale resolution and encodes per pixel which
/// object IDs are visible (bit = object id). Within a disk of the given
/// radius, the ID with the smallest depth wins; pixels whose disk contains
/// only background report all IDs visible. More than 32 objects or an ID
/// outside [0, 32) is an error.
OcclusionMask render_occlusion_mask(const std::vector<SceneObject> &objects,
                                    const Intrinsics &intrinsics,
                                    int downscale = 4, int radius = 4);

/// Looks up an occlusion mask rendered at 1/downscale resolution with a
/// full-resolution pixel coordinate.
bool occlusion_mask_visible(const OcclusionMask &mask, const Vector2d &pixel,
                            int downscale, int object_id);

}  // namespace corrtrack
