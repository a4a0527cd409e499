#include "corrtrack/sequence.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "corrtrack/png_io.h"

namespace corrtrack {

ImageRGB Sequence::frame(std::size_t k) const {
  if (frame_paths.empty()) {
    if (k >= images.size()) throw Error{"Sequence::frame: index out of range"};
    return images[k];
  }
  if (k >= frame_paths.size())
    throw Error{"Sequence::frame: index out of range"};
  return read_png(frame_paths[k]);
}

void save_poses_csv(const std::string &path, const std::vector<Pose> &poses) {
  std::ofstream file{path};
  if (!file) throw Error{"save_poses_csv: cannot open " + path};
  file << "frame,r11,r12,r13,r21,r22,r23,r31,r32,r33,tx,ty,tz\n";
  file.precision(17);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    file << k;
    const Matrix3d &r = poses[k].rotation;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col) file << ',' << r(row, col);
    for (int i = 0; i < 3; ++i) file << ',' << poses[k].translation[i];
    file << '\n';
  }
  if (!file) throw Error{"save_poses_csv: write failed for " + path};
}

std::vector<Pose> load_poses_csv(const std::string &path) {
  std::ifstream file{path};
  if (!file) throw Error{"load_poses_csv: cannot open " + path};
  std::vector<Pose> poses;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    // Skip headers and comments.
    const char first = line[0];
    if (!(std::isdigit(first) || first == '-' || first == '+')) continue;
    std::istringstream stream{line};
    std::string token;
    std::vector<double> values;
    while (std::getline(stream, token, ',')) values.push_back(std::stod(token));
    if (values.size() != 13)
      throw Error{"load_poses_csv: malformed row in " + path};
    Pose pose;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col)
        pose.rotation(row, col) = values[1 + row * 3 + col];
    pose.translation = Vector3d{values[10], values[11], values[12]};
    poses.push_back(pose);
  }
  return poses;
}

void save_intrinsics(const std::string &path, const Intrinsics &intrinsics) {
  std::ofstream file{path};
  if (!file) throw Error{"save_intrinsics: cannot open " + path};
  file.precision(17);
  file << intrinsics.fx << ' ' << intrinsics.fy << ' ' << intrinsics.px << ' '
       << intrinsics.py << ' ' << intrinsics.width << ' ' << intrinsics.height
       << '\n';
}

Intrinsics load_intrinsics(const std::string &path) {
  std::ifstream file{path};
  if (!file) throw Error{"load_intrinsics: cannot open " + path};
  Intrinsics intrinsics;
  if (!(file >> intrinsics.fx >> intrinsics.fy >> intrinsics.px >>
        intrinsics.py >> intrinsics.width >> intrinsics.height))
    throw Error{"load_intrinsics: malformed file " + path};
  return intrinsics;
}

Sequence load_sequence_dir(const std::string &dir) {
  namespace fs = std::filesystem;
  Sequence sequence;
  sequence.intrinsics = load_intrinsics((fs::path{dir} / "calibration.txt").string());
  for (std::size_t k = 0;; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame%04zu.png", k);
    const fs::path frame = fs::path{dir} / name;
    if (!fs::exists(frame)) break;
    sequence.frame_paths.push_back(frame.string());
  }
  if (sequence.frame_paths.empty())
    throw Error{"load_sequence_dir: no frames in " + dir};
  const fs::path gt = fs::path{dir} / "gt_poses.csv";
  if (fs::exists(gt)) {
    sequence.gt_poses = load_poses_csv(gt.string());
    if (sequence.gt_poses.size() < sequence.frame_paths.size())
      throw Error{"load_sequence_dir: fewer ground-truth poses than frames"};
    sequence.gt_poses.resize(sequence.frame_paths.size());
  }
  return sequence;
}

}  // namespace corrtrack
