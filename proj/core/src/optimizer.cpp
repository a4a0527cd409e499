#include "corrtrack/optimizer.h"

#include <Eigen/Cholesky>

namespace corrtrack {

std::optional<DistanceJacobians> distance_jacobians(
    const Vector3d &model_point, const Pose &pose,
    const Intrinsics &intrinsics, const LineGeometry &geometry) {
  const Vector3d p = pose * model_point;
  if (p.z() <= 0.0) return std::nullopt;

  DistanceJacobians jacobians;
  jacobians.d_theta.leftCols<3>() = pose.rotation * -skew(model_point);
  jacobians.d_theta.rightCols<3>() = pose.rotation;

  const double scale_factor = geometry.major_component / geometry.scale;
  const double inv_z2 = 1.0 / (p.z() * p.z());
  const double nx_fx = geometry.normal.x() * intrinsics.fx;
  const double ny_fy = geometry.normal.y() * intrinsics.fy;
  jacobians.d_point << scale_factor * inv_z2 * nx_fx * p.z(),
      scale_factor * inv_z2 * ny_fy * p.z(),
      scale_factor * inv_z2 * (-nx_fx * p.x() - ny_fy * p.y());
  return jacobians;
}

std::pair<double, double> line_derivatives_global(
    const PosteriorDistribution &distribution, double d_s) {
  const double inv_variance = 1.0 / distribution.variance;
  return {-(d_s - distribution.mean) * inv_variance, -inv_variance};
}

std::optional<std::pair<double, double>> line_derivatives_local(
    const PosteriorDistribution &distribution, double d_s, double step_size) {
  const auto &support = distribution.support;
  if (support.size() < 2) return std::nullopt;
  if (d_s < support.front() || d_s >= support.back()) return std::nullopt;
  // Support is an ascending unit-spaced grid; bracket the estimate.
  const int lower = static_cast<int>(std::floor(d_s - support.front()));
  const int upper = lower + 1;
  const double p_lower = distribution.probabilities[lower];
  const double p_upper = distribution.probabilities[upper];
  if (p_lower <= 0.0 || p_upper <= 0.0) return std::nullopt;
  const double inv_variance = 1.0 / distribution.variance;
  return std::make_pair(step_size * inv_variance * std::log(p_upper / p_lower),
                        -inv_variance);
}

NormalEquations assemble(
    const std::vector<CorrespondenceLine> &lines,
    const std::vector<PosteriorDistribution> &distributions, const Pose &pose,
    const Intrinsics &intrinsics, OptimizationMode mode,
    const OptimizerConfig &config) {
  if (lines.size() != distributions.size())
    throw Error{"assemble: line/distribution count mismatch"};

  NormalEquations equations;
  int contributing = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const CorrespondenceLine &line = lines[i];
    if (!line.valid) continue;
    const auto jacobians = distance_jacobians(
        line.model_point, pose, intrinsics,
        {line.normal, line.major_component, line.scale});
    if (!jacobians) continue;

    const Vector3d camera_point = pose * line.model_point;
    const Vector2d projected = project(intrinsics, camera_point);
    const double distance = line.normal.dot(projected - line.center);
    const double d_s = line.to_scaled(distance);

    double first, second;
    if (mode == OptimizationMode::kLocal) {
      if (const auto local =
              line_derivatives_local(distributions[i], d_s, config.step_size)) {
        std::tie(first, second) = *local;
      } else {
        std::tie(first, second) = line_derivatives_global(distributions[i], d_s);
      }
    } else {
      std::tie(first, second) = line_derivatives_global(distributions[i], d_s);
    }

    const RowVector6d row = jacobians->d_point * jacobians->d_theta;
    equations.gradient += first * row.transpose();
    equations.hessian += second * row.transpose() * row;
    ++contributing;
  }
  if (contributing == 0) throw Error{"assemble: no data"};
  return equations;
}

VariationVector solve_step(const NormalEquations &equations,
                           const OptimizerConfig &config) {
  Matrix6d system = -equations.hessian;
  system.topLeftCorner<3, 3>() += config.lambda_r * Matrix3d::Identity();
  system.bottomRightCorner<3, 3>() += config.lambda_t * Matrix3d::Identity();
  if (!system.allFinite() || !equations.gradient.allFinite())
    throw Error{"solve_step: non-finite normal equations"};
  const Eigen::LLT<Matrix6d> llt{system};
  if (llt.info() != Eigen::Success)
    throw Error{"solve_step: factorization failed"};
  const Vector6d theta = llt.solve(equations.gradient);
  if (!theta.allFinite()) throw Error{"solve_step: non-finite solution"};
  return VariationVector::from_stacked(theta);
}

}  // namespace corrtrack
