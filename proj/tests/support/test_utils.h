#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "corrtrack/common.h"
#include "corrtrack/pose.h"

namespace test_utils {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("corrtrack_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string &name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string &path, const std::string &content) {
  std::ofstream file{path};
  file << content;
}

inline corrtrack::Vector3d random_unit_vector(std::mt19937 &rng) {
  std::normal_distribution<double> normal;
  corrtrack::Vector3d v{normal(rng), normal(rng), normal(rng)};
  while (v.norm() < 1e-6) v = {normal(rng), normal(rng), normal(rng)};
  return v.normalized();
}

inline corrtrack::Pose random_pose(std::mt19937 &rng, double max_angle = M_PI,
                                   double translation_range = 1.0) {
  std::uniform_real_distribution<double> uniform{-1.0, 1.0};
  const corrtrack::Vector3d axis = random_unit_vector(rng);
  const double angle = max_angle * uniform(rng);
  corrtrack::Pose pose;
  pose.rotation = corrtrack::exp_map(axis * angle);
  pose.translation = translation_range *
                     corrtrack::Vector3d{uniform(rng), uniform(rng),
                                         uniform(rng)};
  return pose;
}

/// Unit-cube OBJ with quad faces (exercises fan triangulation).
inline std::string unit_cube_obj() {
  return R"(# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 4 3 2
f 5 6 7 8
f 1 2 6 5
f 2 3 7 6
f 3 4 8 7
f 4 1 5 8
)";
}

}  // namespace test_utils
