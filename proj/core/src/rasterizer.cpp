#include "corrtrack/rasterizer.h"

#include <algorithm>
#include <cmath>

namespace corrtrack {

namespace {

constexpr double kNearPlane = 1e-4;  // meters

struct ScreenVertex {
  double x, y;     // pixel coordinates
  double inv_z;    // 1/Z, affine in screen space
};

// Clips a camera-frame triangle against Z = kNearPlane (Sutherland-Hodgman).
// Returns 0, 3, or 4 vertices.
int clip_near(const Vector3d in[3], Vector3d out[4]) {
  int count = 0;
  for (int i = 0; i < 3; ++i) {
    const Vector3d &a = in[i];
    const Vector3d &b = in[(i + 1) % 3];
    const bool a_in = a.z() >= kNearPlane;
    const bool b_in = b.z() >= kNearPlane;
    if (a_in) out[count++] = a;
    if (a_in != b_in) {
      const double t = (kNearPlane - a.z()) / (b.z() - a.z());
      out[count++] = a + t * (b - a);
    }
  }
  return count;
}

inline double edge_function(const ScreenVertex &a, const ScreenVertex &b,
                            double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Accepts pixels on top and left edges so that shared edges are filled once.
inline bool edge_accepts(double e, const ScreenVertex &a,
                         const ScreenVertex &b) {
  if (e > 0.0) return true;
  if (e < 0.0) return false;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dy < 0.0 || (dy == 0.0 && dx > 0.0);
}

// Rasterizes one screen-space triangle; writer(x, y, depth) receives every
// covered pixel.
template <typename Writer>
void fill_triangle(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2,
                   int width, int height, Writer &&writer) {
  double area2 = (v1.x - v0.x) * (v2.y - v0.y) - (v1.y - v0.y) * (v2.x - v0.x);
  if (area2 == 0.0) return;
  if (area2 < 0.0) {
    std::swap(v1, v2);
    area2 = -area2;
  }
  const int x_min = std::max(0, static_cast<int>(
                                    std::ceil(std::min({v0.x, v1.x, v2.x}))));
  const int x_max = std::min(width - 1, static_cast<int>(std::floor(
                                            std::max({v0.x, v1.x, v2.x}))));
  const int y_min = std::max(0, static_cast<int>(
                                    std::ceil(std::min({v0.y, v1.y, v2.y}))));
  const int y_max = std::min(height - 1, static_cast<int>(std::floor(
                                             std::max({v0.y, v1.y, v2.y}))));
  const double inv_area2 = 1.0 / area2;
  for (int y = y_min; y <= y_max; ++y) {
    for (int x = x_min; x <= x_max; ++x) {
      const double px = static_cast<double>(x);
      const double py = static_cast<double>(y);
      const double e01 = edge_function(v0, v1, px, py);
      const double e12 = edge_function(v1, v2, px, py);
      const double e20 = edge_function(v2, v0, px, py);
      if (!edge_accepts(e01, v0, v1) || !edge_accepts(e12, v1, v2) ||
          !edge_accepts(e20, v2, v0))
        continue;
      // Barycentric weights; e12 belongs to v0, e20 to v1, e01 to v2.
      const double inv_z = (e12 * v0.inv_z + e20 * v1.inv_z + e01 * v2.inv_z) *
                           inv_area2;
      if (inv_z <= 0.0) continue;
      writer(x, y, 1.0 / inv_z);
    }
  }
}

template <typename Writer>
void rasterize_mesh(const TriangleMesh &mesh, const Pose &pose,
                    const Intrinsics &intrinsics, Writer &&writer) {
  std::vector<Vector3d> camera_points(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    camera_points[i] = pose * mesh.vertices[i];

  auto to_screen = [&](const Vector3d &p) {
    return ScreenVertex{p.x() / p.z() * intrinsics.fx + intrinsics.px,
                        p.y() / p.z() * intrinsics.fy + intrinsics.py,
                        1.0 / p.z()};
  };

  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto &tri = mesh.triangles[t];
    const Vector3d corners[3] = {camera_points[tri[0]], camera_points[tri[1]],
                                 camera_points[tri[2]]};
    Vector3d clipped[4];
    const int count = clip_near(corners, clipped);
    if (count < 3) continue;
    ScreenVertex screen[4];
    for (int i = 0; i < count; ++i) screen[i] = to_screen(clipped[i]);
    auto write = [&](int x, int y, double depth) {
      writer(x, y, depth, static_cast<std::int32_t>(t));
    };
    fill_triangle(screen[0], screen[1], screen[2], intrinsics.width,
                  intrinsics.height, write);
    if (count == 4)
      fill_triangle(screen[0], screen[2], screen[3], intrinsics.width,
                    intrinsics.height, write);
  }
}

}  // namespace

DepthImage render_depth(const TriangleMesh &mesh, const Pose &pose,
                        const Intrinsics &intrinsics) {
  DepthImage depth{intrinsics.width, intrinsics.height, 0.0f};
  rasterize_mesh(mesh, pose, intrinsics,
                 [&](int x, int y, double z, std::int32_t) {
                   float &d = depth.at(x, y);
                   const float zf = static_cast<float>(z);
                   if (d == 0.0f || zf < d) d = zf;
                 });
  return depth;
}

IndexedRender render_indexed(const TriangleMesh &mesh, const Pose &pose,
                             const Intrinsics &intrinsics) {
  IndexedRender render{DepthImage{intrinsics.width, intrinsics.height, 0.0f},
                       Image<std::int32_t>{intrinsics.width, intrinsics.height,
                                           -1}};
  rasterize_mesh(mesh, pose, intrinsics,
                 [&](int x, int y, double z, std::int32_t tri) {
                   float &d = render.depth.at(x, y);
                   const float zf = static_cast<float>(z);
                   if (d == 0.0f || zf < d) {
                     d = zf;
                     render.triangle_index.at(x, y) = tri;
                   }
                 });
  return render;
}

namespace {

inline bool is_foreground(const SilhouetteMask &mask, int x, int y) {
  return mask.contains(x, y) && mask.at(x, y) != 0;
}

}  // namespace

std::vector<ContourPoint> extract_contour(const SilhouetteMask &mask) {
  bool any_foreground = false;
  std::vector<ContourPoint> contour;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      any_foreground = true;
      const bool boundary =
          !is_foreground(mask, x - 1, y) || !is_foreground(mask, x + 1, y) ||
          !is_foreground(mask, x, y - 1) || !is_foreground(mask, x, y + 1);
      if (!boundary) continue;

      // Average of unit directions toward background cells in a 5x5 window.
      Vector2d normal = Vector2d::Zero();
      for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (is_foreground(mask, x + dx, y + dy)) continue;
          normal += Vector2d{dx, dy}.normalized();
        }
      }
      if (normal.squaredNorm() < 1e-12) {
        if (!is_foreground(mask, x + 1, y))
          normal = {1.0, 0.0};
        else if (!is_foreground(mask, x - 1, y))
          normal = {-1.0, 0.0};
        else if (!is_foreground(mask, x, y + 1))
          normal = {0.0, 1.0};
        else
          normal = {0.0, -1.0};
      }
      contour.push_back({{static_cast<double>(x), static_cast<double>(y)},
                         normal.normalized()});
    }
  }
  if (!any_foreground) throw Error{"extract_contour: empty mask"};
  return contour;
}

std::pair<double, double> continuous_distance(const SilhouetteMask &mask,
                                              const Vector2d &point,
                                              const Vector2d &normal) {
  const int max_steps = mask.width() + mask.height();
  double foreground_dist = 0.0;
  for (int t = 0; t <= max_steps; ++t) {
    const Vector2d pos = point - static_cast<double>(t) * normal;
    const int x = round_to_pixel(pos.x());
    const int y = round_to_pixel(pos.y());
    if (!mask.contains(x, y) || !mask.at(x, y)) break;
    foreground_dist = static_cast<double>(t) + 1.0;
  }
  double background_dist = 0.0;
  for (int t = 1; t <= max_steps; ++t) {
    const Vector2d pos = point + static_cast<double>(t) * normal;
    const int x = round_to_pixel(pos.x());
    const int y = round_to_pixel(pos.y());
    if (!mask.contains(x, y) || mask.at(x, y)) break;
    background_dist = static_cast<double>(t);
  }
  return {foreground_dist, background_dist};
}

OcclusionMask render_occlusion_mask(const std::vector<SceneObject> &objects,
                                    const Intrinsics &intrinsics,
                                    int downscale, int radius) {
  if (objects.size() > 32)
    throw Error{"render_occlusion_mask: more than 32 objects"};
  for (const SceneObject &object : objects)
    if (object.id < 0 || object.id >= 32)
      throw Error{"render_occlusion_mask: object id out of range"};
  if (downscale < 1) throw Error{"render_occlusion_mask: bad downscale"};

  Intrinsics small = intrinsics;
  small.fx /= downscale;
  small.fy /= downscale;
  small.px /= downscale;
  small.py /= downscale;
  small.width = std::max(1, intrinsics.width / downscale);
  small.height = std::max(1, intrinsics.height / downscale);

  DepthImage depth{small.width, small.height, 0.0f};
  Image<std::int32_t> id_image{small.width, small.height, -1};
  for (const SceneObject &object : objects) {
    rasterize_mesh(*object.mesh, object.pose, small,
                   [&](int x, int y, double z, std::int32_t) {
                     float &d = depth.at(x, y);
                     const float zf = static_cast<float>(z);
                     if (d == 0.0f || zf < d) {
                       d = zf;
                       id_image.at(x, y) = object.id;
                     }
                   });
  }

  // Disk offsets evaluated around every pixel.
  std::vector<std::pair<int, int>> disk;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) disk.emplace_back(dx, dy);

  constexpr std::uint32_t kAllVisible = ~0u;
  OcclusionMask mask{small.width, small.height, kAllVisible};
  for (int y = 0; y < small.height; ++y) {
    for (int x = 0; x < small.width; ++x) {
      float min_depth = 0.0f;
      std::int32_t min_id = -1;
      for (const auto &[dx, dy] : disk) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (!depth.contains(nx, ny)) continue;
        const float d = depth.at(nx, ny);
        if (d == 0.0f) continue;
        if (min_id < 0 || d < min_depth) {
          min_depth = d;
          min_id = id_image.at(nx, ny);
        }
      }
      if (min_id >= 0) mask.at(x, y) = 1u << min_id;
    }
  }
  return mask;
}

bool occlusion_mask_visible(const OcclusionMask &mask, const Vector2d &pixel,
                            int downscale, int object_id) {
  const int x = std::clamp(round_to_pixel(pixel.x() / downscale), 0,
                           mask.width() - 1);
  const int y = std::clamp(round_to_pixel(pixel.y() / downscale), 0,
                           mask.height() - 1);
  return (mask.at(x, y) & (1u << object_id)) != 0;
}

}  // namespace corrtrack
