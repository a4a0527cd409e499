#include "corrtrack/pose.h"

#include <cmath>

namespace corrtrack {

bool Pose::is_valid(double tolerance) const {
  const Matrix3d residual =
      rotation.transpose() * rotation - Matrix3d::Identity();
  if (residual.cwiseAbs().maxCoeff() > tolerance) return false;
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

Matrix3d skew(const Vector3d &v) {
  Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Matrix3d exp_map(const Vector3d &theta_r) {
  const double angle = theta_r.norm();
  const Matrix3d k = skew(theta_r);
  if (angle < 1e-10) {
    // Second-order Taylor expansion, exact to machine precision here.
    return Matrix3d::Identity() + k + 0.5 * k * k;
  }
  const double a = std::sin(angle) / angle;
  const double b = (1.0 - std::cos(angle)) / (angle * angle);
  return Matrix3d::Identity() + a * k + b * k * k;
}

Vector3d apply_variation(const Pose &pose, const VariationVector &theta,
                         const Vector3d &model_point) {
  const Vector3d varied =
      model_point + theta.theta_r.cross(model_point) + theta.theta_t;
  return pose.rotation * varied + pose.translation;
}

Pose update_pose(const Pose &pose, const VariationVector &theta) {
  return pose * Pose{exp_map(theta.theta_r), theta.theta_t};
}

}  // namespace corrtrack
