#include "corrtrack/metrics.h"

#include <algorithm>
#include <cmath>

namespace corrtrack {

std::pair<double, double> pose_errors(const Pose &estimate, const Pose &gt) {
  const double e_t = (estimate.translation - gt.translation).norm();
  const double cos_angle = std::clamp(
      ((estimate.rotation.transpose() * gt.rotation).trace() - 1.0) / 2.0,
      -1.0, 1.0);
  return {e_t, std::acos(cos_angle)};
}

double vertex_error(const TriangleMesh &mesh, const Pose &estimate,
                    const Pose &gt) {
  if (mesh.vertices.empty()) throw Error{"vertex_error: empty mesh"};
  const Pose relative = estimate.inverse() * gt;
  double sum = 0.0;
  for (const auto &vertex : mesh.vertices)
    sum += (vertex - relative * vertex).norm();
  return sum / static_cast<double>(mesh.vertices.size());
}

double auc_score(const std::vector<double> &vertex_errors, double diameter,
                 double k_max) {
  if (diameter <= 0.0) throw Error{"auc_score: diameter must be > 0"};
  if (vertex_errors.empty()) return 0.0;

  constexpr int kSamples = 201;
  const double n = static_cast<double>(vertex_errors.size());
  auto success_fraction = [&](double threshold) {
    const std::size_t count =
        std::count_if(vertex_errors.begin(), vertex_errors.end(),
                      [&](double e) { return e < threshold; });
    return static_cast<double>(count) / n;
  };

  double integral = 0.0;
  double previous = success_fraction(0.0);
  const double step = k_max / (kSamples - 1);
  for (int i = 1; i < kSamples; ++i) {
    const double current = success_fraction(step * i * diameter);
    integral += 0.5 * (previous + current) * step;
    previous = current;
  }
  // The strict inequality makes the first trapezoid lose half a sample even
  // for zero errors; normalizing by that quadrature maximum pins a perfect
  // tracker to exactly 20.
  const double perfect = k_max * (1.0 - 0.5 / (kSamples - 1));
  return 20.0 * integral / perfect;
}

}  // namespace corrtrack
