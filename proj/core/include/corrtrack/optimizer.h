#pragma once

#include <optional>
#include <vector>

#include "corrtrack/camera.h"
#include "corrtrack/correspondence_line.h"
#include "corrtrack/pose.h"

namespace corrtrack {

enum class OptimizationMode { kGlobal, kLocal };

struct OptimizerConfig {
  double lambda_r = 5000.0;    // rotational Tikhonov regularization
  double lambda_t = 500000.0;  // translational Tikhonov regularization
  double step_size = 1.3;      // local-mode first-derivative weight
};

/// Gradient and Hessian of the joint log-posterior at theta = 0.
struct NormalEquations {
  Vector6d gradient = Vector6d::Zero();
  Matrix6d hessian = Matrix6d::Zero();
};

/// Derivative of the scaled contour distance with respect to the camera-frame
/// point (1x3) and of the camera-frame point with respect to the pose
/// variation (3x6).
struct DistanceJacobians {
  RowVector3d d_point;
  Matrix3x6d d_theta;
};

struct LineGeometry {
  Vector2d normal;
  double major_component;
  int scale;
};

/// Returns nullopt when the transformed point is behind the camera (the line
/// is dropped).
std::optional<DistanceJacobians> distance_jacobians(
    const Vector3d &model_point, const Pose &pose,
    const Intrinsics &intrinsics, const LineGeometry &geometry);

/// Normal-distribution approximation of the log-posterior derivatives:
/// first = -(d_s - mean)/variance, second = -1/variance.
std::pair<double, double> line_derivatives_global(
    const PosteriorDistribution &distribution, double d_s);

/// Finite-difference approximation from the two support probabilities
/// bracketing d_s, weighted by step_size/variance; the second-order term
/// reuses the global approximation. Returns nullopt when d_s leaves the
/// support interior or a bracketing probability is zero (callers fall back
/// to the global derivatives).
std::optional<std::pair<double, double>> line_derivatives_local(
    const PosteriorDistribution &distribution, double d_s, double step_size);

/// Sums per-line gradient and Hessian contributions at theta = 0 for the
/// current pose. Lines whose point falls behind the camera contribute
/// nothing; zero contributing lines is an error ("no data").
NormalEquations assemble(const std::vector<CorrespondenceLine> &lines,
                         const std::vector<PosteriorDistribution> &distributions,
                         const Pose &pose, const Intrinsics &intrinsics,
                         OptimizationMode mode, const OptimizerConfig &config);

/// Solves (-H + diag(lambda_r I3, lambda_t I3)) theta = g via Cholesky.
VariationVector solve_step(const NormalEquations &equations,
                           const OptimizerConfig &config);

}  // namespace corrtrack
