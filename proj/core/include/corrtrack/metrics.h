#pragma once

#include <vector>

#include "corrtrack/mesh.h"
#include "corrtrack/pose.h"

namespace corrtrack {

/// Translational error ||t - t_gt|| in meters and rotational error
/// acos((trace(R^T R_gt) - 1) / 2) in radians, argument clamped to [-1, 1].
std::pair<double, double> pose_errors(const Pose &estimate, const Pose &gt);

/// Mean displacement of the mesh vertices under the relative transform
/// between estimate and ground truth, in meters.
double vertex_error(const TriangleMesh &mesh, const Pose &estimate,
                    const Pose &gt);

/// Area-under-curve score over relative vertex-error thresholds
/// k_e in [0, k_max]: the fraction of frames with e_v < k_e * diameter is
/// integrated with a 201-sample trapezoid rule and normalized so that a
/// perfect tracker scores exactly 20.
double auc_score(const std::vector<double> &vertex_errors, double diameter,
                 double k_max = 0.2);

}  // namespace corrtrack
