#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

namespace corrtrack {

/// Error type thrown on contract violations and I/O failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &message) : std::runtime_error{message} {}
};

using Vector2d = Eigen::Vector2d;
using Vector3d = Eigen::Vector3d;
using Matrix3d = Eigen::Matrix3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix3x6d = Eigen::Matrix<double, 3, 6>;
using RowVector3d = Eigen::Matrix<double, 1, 3>;
using RowVector6d = Eigen::Matrix<double, 1, 6>;

}  // namespace corrtrack
