#pragma once

#include "corrtrack/common.h"

namespace corrtrack {

/// Pinhole camera parameters for an undistorted image. Focal lengths and
/// principal point are in pixels; integer pixel coordinates address pixel
/// centers.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double px = 0.0;
  double py = 0.0;
  int width = 0;
  int height = 0;

  bool is_valid() const {
    return fx > 0.0 && fy > 0.0 && width > 0 && height > 0;
  }
};

/// Projects a 3D point given in the camera frame into the image.
/// Throws if the point is not in front of the camera.
Vector2d project(const Intrinsics &intrinsics, const Vector3d &point);

/// Reconstructs a 3D point in the camera frame from a pixel coordinate and
/// the depth along the optical axis. Throws for non-positive depth.
Vector3d back_project(const Intrinsics &intrinsics, const Vector2d &pixel,
                      double depth);

/// Jacobian of project() with respect to the camera-frame point (2x3).
Eigen::Matrix<double, 2, 3> projection_jacobian(const Intrinsics &intrinsics,
                                                const Vector3d &point);

}  // namespace corrtrack
