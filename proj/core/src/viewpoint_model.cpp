#include "corrtrack/viewpoint_model.h"

#include <cstring>
#include <fstream>
#include <random>

#include "corrtrack/primitives.h"
#include "corrtrack/rasterizer.h"

namespace corrtrack {

std::vector<Vector3d> geodesic_directions(int subdivisions) {
  if (subdivisions < 0)
    throw Error{"geodesic_directions: negative subdivision count"};
  const TriangleMesh sphere = make_icosphere(subdivisions, 1.0);
  return sphere.vertices;
}

Intrinsics virtual_camera(const TriangleMesh &mesh, double distance) {
  double bounding_radius = 0.0;
  for (const auto &v : mesh.vertices)
    bounding_radius = std::max(bounding_radius, v.norm());
  if (bounding_radius <= 0.0)
    throw Error{"virtual_camera: degenerate mesh"};
  Intrinsics intrinsics;
  intrinsics.width = 640;
  intrinsics.height = 480;
  const double span = 0.75 * std::min(intrinsics.width, intrinsics.height);
  intrinsics.fx = intrinsics.fy = 0.5 * span * distance / bounding_radius;
  intrinsics.px = 0.5 * (intrinsics.width - 1);
  intrinsics.py = 0.5 * (intrinsics.height - 1);
  return intrinsics;
}

Intrinsics model_render_camera(const TriangleMesh &mesh, double distance) {
  // Rendering above the nominal resolution reduces the contour quantization,
  // which otherwise offsets straight silhouette edges by a coherent
  // sub-pixel amount.
  Intrinsics intrinsics = virtual_camera(mesh, distance);
  intrinsics.fx *= kModelRenderSupersample;
  intrinsics.fy *= kModelRenderSupersample;
  intrinsics.px = kModelRenderSupersample * intrinsics.px +
                  0.5 * (kModelRenderSupersample - 1);
  intrinsics.py = kModelRenderSupersample * intrinsics.py +
                  0.5 * (kModelRenderSupersample - 1);
  intrinsics.width *= kModelRenderSupersample;
  intrinsics.height *= kModelRenderSupersample;
  return intrinsics;
}

Pose virtual_camera_pose(const Vector3d &direction, double distance) {
  const Vector3d z_axis = -direction;  // camera looks at the model origin
  const Vector3d up = std::abs(direction.z()) > std::cos(1.0 * M_PI / 180.0)
                          ? Vector3d{1.0, 0.0, 0.0}
                          : Vector3d{0.0, 0.0, 1.0};
  const Vector3d x_axis = up.cross(z_axis).normalized();
  const Vector3d y_axis = z_axis.cross(x_axis);
  Matrix3d camera_to_model;
  camera_to_model.col(0) = x_axis;
  camera_to_model.col(1) = y_axis;
  camera_to_model.col(2) = z_axis;
  const Pose model_to_camera =
      Pose{camera_to_model, direction * distance}.inverse();
  return model_to_camera;
}

namespace {

std::uint32_t view_seed(std::uint32_t seed, std::uint32_t view_index) {
  // splitmix-style mixing keeps per-view streams independent of build order.
  std::uint64_t h = (static_cast<std::uint64_t>(seed) << 32) | (view_index + 1);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return static_cast<std::uint32_t>(h);
}

}  // namespace

SparseViewpointModel build_model(const TriangleMesh &mesh,
                                 const ViewpointModelConfig &config) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw Error{"build_model: empty mesh"};
  if (config.n_points < 1) throw Error{"build_model: n_points must be >= 1"};

  const std::vector<Vector3d> directions =
      geodesic_directions(config.subdivisions);
  const Intrinsics intrinsics =
      model_render_camera(mesh, config.sphere_radius);

  SparseViewpointModel model;
  model.n_points = config.n_points;
  model.sphere_radius = config.sphere_radius;
  model.views.resize(directions.size());

  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Pose camera_from_model =
        virtual_camera_pose(directions[i], config.sphere_radius);
    const Pose model_from_camera = camera_from_model.inverse();

    const DepthImage depth = render_depth(mesh, camera_from_model, intrinsics);
    const SilhouetteMask mask = silhouette_of(depth);
    std::vector<ContourPoint> contour;
    try {
      contour = extract_contour(mask);
    } catch (const Error &) {
      throw Error{"build_model: empty render for view " + std::to_string(i)};
    }

    View &view = model.views[i];
    view.orientation = model_from_camera.rotation.col(2);
    view.points.reserve(config.n_points);
    view.normals.reserve(config.n_points);
    view.foreground_dist.reserve(config.n_points);
    view.background_dist.reserve(config.n_points);

    std::mt19937 rng{view_seed(config.seed, static_cast<std::uint32_t>(i))};
    for (int k = 0; k < config.n_points; ++k) {
      const auto &sample = contour[rng() % contour.size()];
      const int x = round_to_pixel(sample.point.x());
      const int y = round_to_pixel(sample.point.y());
      const double depth_value = depth.at(x, y);
      // The mask transition sits on the boundary between the foreground
      // pixel and its background neighbor, half a pixel outward; storing
      // the boundary avoids a systematic half-pixel contour expansion.
      const Vector2d boundary = sample.point + 0.5 * sample.normal;
      const Vector3d camera_point =
          back_project(intrinsics, boundary, depth_value);
      view.points.push_back(model_from_camera * camera_point);
      view.normals.push_back(model_from_camera.rotation *
                             Vector3d{sample.normal.x(), sample.normal.y(),
                                      0.0});
      const auto [fg_px, bg_px] =
          continuous_distance(mask, sample.point, sample.normal);
      const double meters_per_pixel = depth_value / intrinsics.fx;
      view.foreground_dist.push_back(fg_px * meters_per_pixel);
      view.background_dist.push_back(bg_px * meters_per_pixel);
    }
  }
  return model;
}

int closest_view(const SparseViewpointModel &model, const Pose &pose) {
  if (model.views.empty()) throw Error{"closest_view: empty model"};
  const Vector3d direction = pose.rotation.transpose() * pose.translation;
  int best_index = 0;
  double best_dot = model.views[0].orientation.dot(direction);
  for (std::size_t i = 1; i < model.views.size(); ++i) {
    const double dot = model.views[i].orientation.dot(direction);
    if (dot > best_dot) {
      best_dot = dot;
      best_index = static_cast<int>(i);
    }
  }
  return best_index;
}

namespace {

constexpr char kMagic[4] = {'S', 'V', 'M', '1'};

void write_f32(std::ostream &out, double value) {
  const float f = static_cast<float>(value);
  out.write(reinterpret_cast<const char *>(&f), sizeof(f));
}

void write_vec3(std::ostream &out, const Vector3d &v) {
  write_f32(out, v.x());
  write_f32(out, v.y());
  write_f32(out, v.z());
}

double read_f32(std::istream &in) {
  float f = 0.0f;
  in.read(reinterpret_cast<char *>(&f), sizeof(f));
  return static_cast<double>(f);
}

Vector3d read_vec3(std::istream &in) {
  const double x = read_f32(in);
  const double y = read_f32(in);
  const double z = read_f32(in);
  return {x, y, z};
}

}  // namespace

void save_model(const std::string &path, const SparseViewpointModel &model) {
  std::ofstream file{path, std::ios::binary};
  if (!file) throw Error{"save_model: cannot open " + path};
  file.write(kMagic, sizeof(kMagic));
  const std::uint32_t n_views = static_cast<std::uint32_t>(model.views.size());
  const std::uint32_t n_points = static_cast<std::uint32_t>(model.n_points);
  file.write(reinterpret_cast<const char *>(&n_views), sizeof(n_views));
  file.write(reinterpret_cast<const char *>(&n_points), sizeof(n_points));
  write_f32(file, model.sphere_radius);
  for (const auto &view : model.views) {
    write_vec3(file, view.orientation);
    for (const auto &p : view.points) write_vec3(file, p);
    for (const auto &n : view.normals) write_vec3(file, n);
    for (double d : view.foreground_dist) write_f32(file, d);
    for (double d : view.background_dist) write_f32(file, d);
  }
  if (!file) throw Error{"save_model: write failed for " + path};
}

SparseViewpointModel load_model(const std::string &path) {
  std::ifstream file{path, std::ios::binary};
  if (!file) throw Error{"load_model: cannot open " + path};
  char magic[4] = {};
  file.read(magic, sizeof(magic));
  if (!file || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error{"load_model: bad magic in " + path};
  std::uint32_t n_views = 0;
  std::uint32_t n_points = 0;
  file.read(reinterpret_cast<char *>(&n_views), sizeof(n_views));
  file.read(reinterpret_cast<char *>(&n_points), sizeof(n_points));
  SparseViewpointModel model;
  model.sphere_radius = read_f32(file);
  if (!file) throw Error{"load_model: truncated header in " + path};
  model.n_points = static_cast<int>(n_points);
  model.views.resize(n_views);
  for (auto &view : model.views) {
    view.orientation = read_vec3(file);
    view.points.resize(n_points);
    view.normals.resize(n_points);
    view.foreground_dist.resize(n_points);
    view.background_dist.resize(n_points);
    for (auto &p : view.points) p = read_vec3(file);
    for (auto &n : view.normals) n = read_vec3(file);
    for (auto &d : view.foreground_dist) d = read_f32(file);
    for (auto &d : view.background_dist) d = read_f32(file);
    if (!file) throw Error{"load_model: truncated file " + path};
  }
  return model;
}

}  // namespace corrtrack
