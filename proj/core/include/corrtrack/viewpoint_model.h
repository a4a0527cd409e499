#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrtrack/camera.h"
#include "corrtrack/mesh.h"
#include "corrtrack/pose.h"

namespace corrtrack {

/// Precomputed geometry of one view: contour points and outward normals in
/// the model frame, the orientation vector pointing from the generating
/// camera to the model center, and per-point continuous foreground/background
/// distances in meters.
struct View {
  Vector3d orientation = Vector3d::Zero();
  std::vector<Vector3d> points;
  std::vector<Vector3d> normals;
  std::vector<double> foreground_dist;
  std::vector<double> background_dist;
};

struct ViewpointModelConfig {
  int n_points = 200;        // contour points per view
  int subdivisions = 4;      // icosahedron subdivisions (2562 views)
  double sphere_radius = 0.8;  // virtual camera distance in meters
  std::uint32_t seed = 0;    // contour sampling seed
};

/// Sparse viewpoint model: per-view contour geometry replacing online
/// rendering during tracking. Immutable after construction.
struct SparseViewpointModel {
  std::vector<View> views;
  int n_points = 0;
  double sphere_radius = 0.0;
};

/// Vertex directions of an icosahedron subdivided the given number of times,
/// projected onto the unit sphere; yields 10*4^subdivisions + 2 directions.
std::vector<Vector3d> geodesic_directions(int subdivisions);

/// Virtual camera used for viewpoint-model rendering: 640x480 with the focal
/// length chosen so the mesh's bounding sphere spans about 75% of the image
/// height at the given distance.
Intrinsics virtual_camera(const TriangleMesh &mesh, double distance);

/// build_model renders at this multiple of the virtual camera resolution to
/// reduce contour quantization.
constexpr int kModelRenderSupersample = 2;

/// The supersampled camera actually used for the model renders.
Intrinsics model_render_camera(const TriangleMesh &mesh, double distance);

/// Pose of the virtual camera placed along `direction` (unit, model frame)
/// at the given distance, looking at the model origin. Returns the
/// model-to-camera transform.
Pose virtual_camera_pose(const Vector3d &direction, double distance);

/// Builds the model by rendering the mesh from every geodesic direction,
/// sampling contour points, and back-projecting them into the model frame.
/// Deterministic for a fixed (mesh, config). Throws if any render is empty.
SparseViewpointModel build_model(const TriangleMesh &mesh,
                                 const ViewpointModelConfig &config = {});

/// Index of the precomputed view closest to the camera direction implied by
/// the pose; ties break toward the lowest index.
int closest_view(const SparseViewpointModel &model, const Pose &pose);

/// Binary cache: header {magic "SVM1", n_v, n_c, sphere_radius}, then
/// per-view float32 data, little-endian.
void save_model(const std::string &path, const SparseViewpointModel &model);
SparseViewpointModel load_model(const std::string &path);

}  // namespace corrtrack
