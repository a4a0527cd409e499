#pragma once

#include "corrtrack/common.h"

namespace corrtrack {

/// Minimal pose variation: axis-angle rotation (radians) stacked over a
/// translation (meters), both expressed in the model frame.
struct VariationVector {
  Vector3d theta_r = Vector3d::Zero();
  Vector3d theta_t = Vector3d::Zero();

  Vector6d stacked() const {
    Vector6d v;
    v << theta_r, theta_t;
    return v;
  }
  static VariationVector from_stacked(const Vector6d &v) {
    return {v.head<3>(), v.tail<3>()};
  }
};

/// Rigid transform between the model frame and the camera frame.
/// rotation is orthonormal with determinant +1; translation is in meters.
struct Pose {
  Matrix3d rotation = Matrix3d::Identity();
  Vector3d translation = Vector3d::Zero();

  Vector3d operator*(const Vector3d &point) const {
    return rotation * point + translation;
  }
  Pose operator*(const Pose &other) const {
    return {rotation * other.rotation,
            rotation * other.translation + translation};
  }
  Pose inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }

  /// True if rotation is orthonormal with det +1 within tolerance.
  bool is_valid(double tolerance = 1e-9) const;
};

/// Skew-symmetric cross-product matrix of a 3-vector.
Matrix3d skew(const Vector3d &v);

/// Exponential map from axis-angle to a rotation matrix (closed-form
/// Rodrigues formula, exact for any angle).
Matrix3d exp_map(const Vector3d &theta_r);

/// Linearized variation of a model point: the rotation part of the variation
/// enters as I + [theta_r]x, so the result is exact only at theta = 0.
/// Returns the varied point in the camera frame.
Vector3d apply_variation(const Pose &pose, const VariationVector &theta,
                         const Vector3d &model_point);

/// Composes the pose on the right with the exact variation transform
/// (exp([theta_r]x), theta_t). Keeps the result on SE(3) without
/// orthonormalization.
Pose update_pose(const Pose &pose, const VariationVector &theta);

}  // namespace corrtrack
