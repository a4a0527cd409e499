#include "corrtrack/camera.h"

namespace corrtrack {

Vector2d project(const Intrinsics &intrinsics, const Vector3d &point) {
  if (point.z() <= 0.0) throw Error{"project: point behind camera"};
  return {point.x() / point.z() * intrinsics.fx + intrinsics.px,
          point.y() / point.z() * intrinsics.fy + intrinsics.py};
}

Vector3d back_project(const Intrinsics &intrinsics, const Vector2d &pixel,
                      double depth) {
  if (depth <= 0.0) throw Error{"back_project: non-positive depth"};
  return {depth * (pixel.x() - intrinsics.px) / intrinsics.fx,
          depth * (pixel.y() - intrinsics.py) / intrinsics.fy, depth};
}

Eigen::Matrix<double, 2, 3> projection_jacobian(const Intrinsics &intrinsics,
                                                const Vector3d &point) {
  if (point.z() <= 0.0) throw Error{"projection_jacobian: point behind camera"};
  const double inv_z = 1.0 / point.z();
  Eigen::Matrix<double, 2, 3> jacobian;
  jacobian << intrinsics.fx * inv_z, 0.0,
      -intrinsics.fx * point.x() * inv_z * inv_z, 0.0, intrinsics.fy * inv_z,
      -intrinsics.fy * point.y() * inv_z * inv_z;
  return jacobian;
}

}  // namespace corrtrack
