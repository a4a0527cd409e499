#include "corrtrack/evaluation.h"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace corrtrack {

EvalReport run_protocol_with(const TrackFn &track_fn, const ReinitFn &reinit_fn,
                             const TriangleMesh &mesh, const Sequence &sequence,
                             const SuccessThresholds &thresholds) {
  if (sequence.size() == 0) throw Error{"run_protocol: empty sequence"};
  if (sequence.gt_poses.size() != sequence.size())
    throw Error{"run_protocol: frame/pose count mismatch"};

  EvalReport report;
  int successes = 0;
  for (std::size_t k = 1; k < sequence.size(); ++k) {
    const ImageRGB image = sequence.frame(k);
    const Pose estimate = track_fn(k, image);
    const Pose &gt = sequence.gt_poses[k];

    const auto [e_t, e_r] = pose_errors(estimate, gt);
    report.e_t.push_back(e_t);
    report.e_r.push_back(e_r);
    report.e_v.push_back(vertex_error(mesh, estimate, gt));
    report.estimated_poses.push_back(estimate);
    const bool ok = e_t < thresholds.translation && e_r < thresholds.rotation;
    report.success.push_back(ok);
    if (ok) {
      ++successes;
    } else {
      ++report.reinit_count;
      reinit_fn(k, image, gt);
    }
  }

  const double scored = static_cast<double>(sequence.size() - 1);
  report.success_rate = 100.0 * static_cast<double>(successes) / scored;
  report.auc = auc_score(report.e_v, mesh.diameter);
  return report;
}

EvalReport run_protocol(const Tracker &tracker, TrackedObject &object,
                        const Sequence &sequence,
                        const SuccessThresholds &thresholds) {
  tracker.initialize(object, sequence.frame(0), sequence.gt_poses.at(0));
  std::vector<TrackedObject> group{object};
  const TrackFn track_fn = [&](std::size_t, const ImageRGB &image) {
    tracker.track_step(group, image);
    return group[0].pose;
  };
  const ReinitFn reinit_fn = [&](std::size_t, const ImageRGB &image,
                                 const Pose &gt) {
    tracker.initialize(group[0], image, gt);
  };
  EvalReport report =
      run_protocol_with(track_fn, reinit_fn, *object.mesh, sequence,
                        thresholds);
  object = group[0];
  return report;
}

namespace fs = std::filesystem;

bool rbot_dataset_present(const std::string &root) {
  return fs::exists(fs::path{root} / "camera_calibration.txt") &&
         fs::exists(fs::path{root} / "poses_first.txt");
}

std::vector<std::string> rbot_objects(const std::string &root) {
  std::vector<std::string> objects;
  if (!fs::exists(root)) return objects;
  for (const auto &entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (fs::exists(entry.path() / (name + ".obj")) &&
        fs::exists(entry.path() / "frames"))
      objects.push_back(name);
  }
  std::sort(objects.begin(), objects.end());
  return objects;
}

namespace {

Intrinsics load_rbot_calibration(const std::string &path) {
  std::ifstream file{path};
  if (!file) throw Error{"load_rbot_sequence: cannot open " + path};
  Intrinsics intrinsics;
  if (!(file >> intrinsics.fx >> intrinsics.fy >> intrinsics.px >>
        intrinsics.py))
    throw Error{"load_rbot_sequence: malformed calibration " + path};
  if (!(file >> intrinsics.width >> intrinsics.height)) {
    intrinsics.width = 640;   // RBOT camera resolution
    intrinsics.height = 512;
  }
  return intrinsics;
}

std::vector<Pose> load_rbot_poses(const std::string &path, double scale) {
  std::ifstream file{path};
  if (!file) throw Error{"load_rbot_sequence: cannot open " + path};
  std::vector<Pose> poses;
  std::string line;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::istringstream stream{line};
    std::vector<double> values;
    double v;
    while (stream >> v) values.push_back(v);
    if (values.size() < 12) continue;  // header or comment
    Pose pose;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col)
        pose.rotation(row, col) = values[row * 3 + col];
    pose.translation =
        Vector3d{values[9], values[10], values[11]} * scale;
    poses.push_back(pose);
  }
  if (poses.empty()) throw Error{"load_rbot_sequence: no poses in " + path};
  return poses;
}

}  // namespace

RbotSequence load_rbot_sequence(const std::string &root,
                                const std::string &object,
                                const std::string &sequence_name,
                                double pose_scale) {
  const fs::path base{root};
  RbotSequence result;
  result.mesh_path = (base / object / (object + ".obj")).string();
  result.sequence.intrinsics =
      load_rbot_calibration((base / "camera_calibration.txt").string());
  result.sequence.gt_poses =
      load_rbot_poses((base / "poses_first.txt").string(), pose_scale);

  const fs::path frames = base / object / "frames";
  for (std::size_t k = 0; k < result.sequence.gt_poses.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s%04zu.png", sequence_name.c_str(), k);
    const fs::path frame = frames / name;
    if (!fs::exists(frame)) break;
    result.sequence.frame_paths.push_back(frame.string());
  }
  if (result.sequence.frame_paths.empty())
    throw Error{"load_rbot_sequence: no frames for " + object + "/" +
                sequence_name};
  result.sequence.gt_poses.resize(result.sequence.frame_paths.size());
  return result;
}

bool opt_dataset_present(const std::string &root) {
  if (!fs::exists(root)) return false;
  for (const auto &entry : fs::directory_iterator(root))
    if (entry.is_directory()) return true;
  return false;
}

RbotSequence load_opt_sequence(const std::string &root,
                               const std::string &object,
                               const std::string &sequence_name) {
  const fs::path base = fs::path{root} / object;
  RbotSequence result;
  result.mesh_path = (base / (object + ".obj")).string();
  const fs::path seq_dir = base / sequence_name;
  result.sequence.intrinsics =
      load_intrinsics((seq_dir / "calibration.txt").string());
  result.sequence.gt_poses =
      load_poses_csv((seq_dir / "gt_poses.csv").string());
  for (std::size_t k = 0; k < result.sequence.gt_poses.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame%04zu.png", k);
    const fs::path frame = seq_dir / "frames" / name;
    if (!fs::exists(frame)) break;
    result.sequence.frame_paths.push_back(frame.string());
  }
  if (result.sequence.frame_paths.empty())
    throw Error{"load_opt_sequence: no frames for " + object + "/" +
                sequence_name};
  result.sequence.gt_poses.resize(result.sequence.frame_paths.size());
  return result;
}

}  // namespace corrtrack
