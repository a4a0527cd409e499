// Command-line front end: viewpoint-model building, sequence tracking,
// dataset evaluation, synthetic-sequence generation, and overlay rendering.

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "corrtrack/config.h"
#include "corrtrack/evaluation.h"
#include "corrtrack/png_io.h"
#include "corrtrack/primitives.h"
#include "corrtrack/synthetic.h"

using namespace corrtrack;

namespace {

SparseViewpointModel build_or_load_model(const std::string &mesh_path,
                                         const std::string &cache_path,
                                         const ViewpointModelConfig &config) {
  if (!cache_path.empty() && std::filesystem::exists(cache_path))
    return load_model(cache_path);
  const TriangleMesh mesh = load_mesh(mesh_path);
  SparseViewpointModel model = build_model(mesh, config);
  if (!cache_path.empty()) save_model(cache_path, model);
  return model;
}

Pose parse_pose_values(const std::vector<double> &values) {
  if (values.size() != 12)
    throw Error{"pose must be 12 values: r11..r33 row-major, tx, ty, tz"};
  Pose pose;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      pose.rotation(row, col) = values[row * 3 + col];
  pose.translation = Vector3d{values[9], values[10], values[11]};
  return pose;
}

TriangleMesh make_shape(const std::string &spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::istringstream stream{spec.substr(colon + 1)};
    std::string token;
    while (std::getline(stream, token, ',')) args.push_back(std::stod(token));
  }
  if (kind == "box" && args.size() == 3)
    return make_cuboid(args[0], args[1], args[2]);
  if (kind == "lblock" && args.size() == 4)
    return make_l_block(args[0], args[1], args[2], args[3]);
  if (kind == "spheroid" && args.size() >= 3)
    return make_bumpy_spheroid(3, {args[0], args[1], args[2]},
                               args.size() > 3 ? args[3] : 0.1, 7);
  if (kind == "icosphere" && args.size() == 1)
    return make_icosphere(3, args[0]);
  throw Error{"unknown shape '" + spec +
              "' (use box:x,y,z | lblock:ax,ay,w,t | spheroid:rx,ry,rz[,bump]"
              " | icosphere:r)"};
}

void print_report(const EvalReport &report) {
  double mean_e_t = 0.0, mean_e_r = 0.0, mean_e_v = 0.0;
  for (std::size_t i = 0; i < report.e_t.size(); ++i) {
    mean_e_t += report.e_t[i];
    mean_e_r += report.e_r[i];
    mean_e_v += report.e_v[i];
  }
  const double n = static_cast<double>(report.e_t.size());
  std::printf("frames scored:   %zu\n", report.e_t.size());
  std::printf("success rate:    %.2f %%\n", report.success_rate);
  std::printf("reinit count:    %d\n", report.reinit_count);
  std::printf("mean e_t:        %.2f mm\n", 1000.0 * mean_e_t / n);
  std::printf("mean e_r:        %.3f deg\n", mean_e_r / n * 180.0 / M_PI);
  std::printf("mean e_v:        %.2f mm\n", 1000.0 * mean_e_v / n);
  std::printf("AUC score:       %.2f / 20\n", report.auc);
}

void write_report_csv(const std::string &path, const EvalReport &report) {
  std::ofstream file{path};
  if (!file) throw Error{"cannot open " + path};
  file << "frame,e_t,e_r,e_v,success\n";
  for (std::size_t i = 0; i < report.e_t.size(); ++i)
    file << i + 1 << ',' << report.e_t[i] << ',' << report.e_r[i] << ','
         << report.e_v[i] << ',' << (report.success[i] ? 1 : 0) << '\n';
}

int run_build_model(const std::string &mesh_path, const std::string &out,
                    int n_points, int subdivisions, double radius,
                    unsigned seed) {
  const TriangleMesh mesh = load_mesh(mesh_path);
  ViewpointModelConfig config;
  config.n_points = n_points;
  config.subdivisions = subdivisions;
  config.sphere_radius = radius;
  config.seed = seed;
  const SparseViewpointModel model = build_model(mesh, config);
  save_model(out, model);
  std::printf("wrote %s: %zu views x %d points (diameter %.3f m)\n",
              out.c_str(), model.views.size(), model.n_points, mesh.diameter);
  return 0;
}

int run_track(const std::string &config_path, const std::string &frames_dir,
              const std::string &out, const std::string &report_path) {
  const AppConfig config = load_config(config_path);
  if (config.objects.empty())
    throw Error{"config has no objects"};
  const Sequence sequence = load_sequence_dir(frames_dir);
  const Tracker tracker{config.tracker, sequence.intrinsics};

  // The first object is the tracked target; further entries (typically
  // optimize=false occluders) join the group and the occlusion mask.
  std::vector<TriangleMesh> meshes;
  std::vector<SparseViewpointModel> models;
  meshes.reserve(config.objects.size());
  models.reserve(config.objects.size());
  std::vector<TrackedObject> group;
  for (std::size_t i = 0; i < config.objects.size(); ++i) {
    const ObjectSpec &spec = config.objects[i];
    meshes.push_back(load_mesh(spec.mesh_path));
    models.push_back(
        build_or_load_model(spec.mesh_path, spec.model_cache, config.model));
    TrackedObject object;
    object.mesh = &meshes.back();
    object.model = &models.back();
    object.id = static_cast<int>(i);
    object.overrides = spec.overrides;
    object.optimize = spec.optimize;
    if (spec.has_initial_pose)
      object.pose = spec.initial_pose;
    else if (i > 0)
      throw Error{"object '" + spec.name + "' needs an initial_pose"};
    group.push_back(std::move(object));
  }

  Pose initial;
  if (config.objects.front().has_initial_pose)
    initial = config.objects.front().initial_pose;
  else if (!sequence.gt_poses.empty())
    initial = sequence.gt_poses.front();
  else
    throw Error{"no initial pose: set objects[0].initial_pose in the config "
                "or provide gt_poses.csv"};

  if (!sequence.gt_poses.empty()) {
    tracker.initialize(group[0], sequence.frame(0), sequence.gt_poses[0]);
    const TrackFn track_fn = [&](std::size_t, const ImageRGB &image) {
      tracker.track_step(group, image);
      return group[0].pose;
    };
    const ReinitFn reinit_fn = [&](std::size_t, const ImageRGB &image,
                                   const Pose &gt) {
      tracker.initialize(group[0], image, gt);
    };
    EvalReport report =
        run_protocol_with(track_fn, reinit_fn, *group[0].mesh, sequence);
    std::vector<Pose> poses{sequence.gt_poses.front()};
    poses.insert(poses.end(), report.estimated_poses.begin(),
                 report.estimated_poses.end());
    save_poses_csv(out, poses);
    print_report(report);
    if (!report_path.empty()) write_report_csv(report_path, report);
  } else {
    tracker.initialize(group[0], sequence.frame(0), initial);
    std::vector<Pose> poses{initial};
    for (std::size_t k = 1; k < sequence.size(); ++k) {
      tracker.track_step(group, sequence.frame(k));
      poses.push_back(group[0].pose);
    }
    save_poses_csv(out, poses);
    std::printf("tracked %zu frames (no ground truth; poses written to %s)\n",
                sequence.size(), out.c_str());
  }
  return 0;
}

struct DatasetTask {
  std::string object;
  std::string sequence;
};

int run_evaluate_rbot(const std::string &root, std::vector<std::string> objects,
                      const std::string &sequence_name, double pose_scale,
                      const std::string &config_path, int jobs) {
  if (!rbot_dataset_present(root)) {
    std::fprintf(stderr, "dataset not found at %s\n", root.c_str());
    return 2;
  }
  AppConfig config;
  if (!config_path.empty()) config = load_config(config_path);
  if (objects.empty()) objects = rbot_objects(root);
  if (objects.empty()) {
    std::fprintf(stderr, "no object directories under %s\n", root.c_str());
    return 2;
  }

  std::mutex print_mutex;
  std::atomic<std::size_t> next{0};
  std::vector<double> rates(objects.size(), 0.0);
  auto worker = [&] {
    for (std::size_t i = next++; i < objects.size(); i = next++) {
      const RbotSequence data =
          load_rbot_sequence(root, objects[i], sequence_name, pose_scale);
      const TriangleMesh mesh = load_mesh(data.mesh_path);
      const SparseViewpointModel model = build_model(mesh, config.model);
      Tracker tracker{config.tracker, data.sequence.intrinsics};
      TrackedObject object;
      object.mesh = &mesh;
      object.model = &model;
      const EvalReport report = run_protocol(tracker, object, data.sequence);
      rates[i] = report.success_rate;
      const std::scoped_lock lock{print_mutex};
      std::printf("%-16s %s: %.1f %% (%d reinits)\n", objects[i].c_str(),
                  sequence_name.c_str(), report.success_rate,
                  report.reinit_count);
      std::fflush(stdout);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto &thread : threads) thread.join();
  }
  double total = 0.0;
  for (double r : rates) total += r;
  std::printf("average          %s: %.1f %%\n", sequence_name.c_str(),
              total / static_cast<double>(objects.size()));
  return 0;
}

int run_evaluate_opt(const std::string &root, const std::string &object_name,
                     const std::string &sequence_name,
                     const std::string &config_path) {
  if (!opt_dataset_present(root)) {
    std::fprintf(stderr, "dataset not found at %s\n", root.c_str());
    return 2;
  }
  AppConfig config;
  if (!config_path.empty()) config = load_config(config_path);
  const RbotSequence data = load_opt_sequence(root, object_name, sequence_name);
  const TriangleMesh mesh = load_mesh(data.mesh_path);
  const SparseViewpointModel model = build_model(mesh, config.model);
  Tracker tracker{config.tracker, data.sequence.intrinsics};
  TrackedObject object;
  object.mesh = &mesh;
  object.model = &model;
  const EvalReport report = run_protocol(tracker, object, data.sequence);
  print_report(report);
  return 0;
}

int run_synthesize(const std::string &mesh_path, const std::string &shape,
                   const std::string &out_dir, std::size_t frames,
                   unsigned seed, const std::string &background_path,
                   double focal, double distance, double rot_amp_deg,
                   double trans_amp_mm, double noise, int blur,
                   const std::string &export_mesh) {
  const TriangleMesh mesh =
      mesh_path.empty() ? make_shape(shape) : load_mesh(mesh_path);
  if (!export_mesh.empty()) save_mesh(export_mesh, mesh);
  Intrinsics intrinsics{focal, focal, 319.5, 239.5, 640, 480};
  ImageRGB background =
      background_path.empty()
          ? make_clutter_background(intrinsics.width, intrinsics.height, seed)
          : read_png(background_path);
  if (background.width() != intrinsics.width ||
      background.height() != intrinsics.height)
    throw Error{"background must be 640x480"};

  Pose start;
  start.rotation = exp_map({0.35, 0.25, 0.15});
  start.translation = {0.0, -0.01, distance};
  MotionSpec motion;
  motion.rotation_amplitude_rad = rot_amp_deg * M_PI / 180.0;
  motion.translation_amplitude = Vector3d{1.2, 1.0, 1.0} * trans_amp_mm / 1000.0;
  const std::vector<Pose> trajectory = make_trajectory(start, frames, motion);

  ImagingConfig imaging;
  imaging.blur_passes = blur;
  imaging.noise_stddev = noise;
  generate_synthetic_sequence(mesh, trajectory, background, intrinsics, seed,
                              out_dir, imaging);
  std::printf("wrote %zu frames, gt_poses.csv, calibration.txt to %s\n",
              frames, out_dir.c_str());
  return 0;
}

int run_overlay(const std::string &image_path, const std::string &mesh_path,
                const std::vector<double> &pose_values,
                const std::string &calibration_path, const std::string &out) {
  const ImageRGB image = read_png(image_path);
  const TriangleMesh mesh = load_mesh(mesh_path);
  const Pose pose = parse_pose_values(pose_values);
  const Intrinsics intrinsics = load_intrinsics(calibration_path);
  const std::size_t drawn = emit_overlay(image, mesh, pose, intrinsics, out);
  std::printf("wrote %s (%zu contour pixels)\n", out.c_str(), drawn);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sparse region-based 6-DoF object tracker"};
  app.require_subcommand(1);

  // build-model
  auto *build = app.add_subcommand(
      "build-model", "Precompute a sparse viewpoint model from a mesh");
  std::string mesh_path, out_path;
  int n_points = 200, subdivisions = 4;
  double radius = 0.8;
  unsigned seed = 0;
  build->add_option("--mesh", mesh_path, "Wavefront OBJ file")->required();
  build->add_option("--out", out_path, "output .svm file")->required();
  build->add_option("--n-c", n_points, "contour points per view");
  build->add_option("--subdiv", subdivisions, "icosahedron subdivisions");
  build->add_option("--radius", radius, "virtual camera distance [m]");
  build->add_option("--seed", seed, "contour sampling seed");

  // track
  auto *track = app.add_subcommand("track", "Track an object over a sequence");
  std::string config_path, frames_dir, poses_out = "poses.csv", report_out;
  track->add_option("--config", config_path, "JSON configuration")->required();
  track->add_option("--frames", frames_dir,
                    "sequence directory (frameNNNN.png, calibration.txt, "
                    "optional gt_poses.csv)")
      ->required();
  track->add_option("--out", poses_out, "output pose CSV");
  track->add_option("--report", report_out, "per-frame error CSV");

  // evaluate-rbot
  auto *rbot = app.add_subcommand("evaluate-rbot",
                                  "Success-rate protocol on an RBOT-style "
                                  "dataset directory");
  std::string rbot_root, rbot_sequence = "a_regular", rbot_config;
  std::vector<std::string> rbot_objects_arg;
  double pose_scale = 0.001;
  int jobs = 1;
  rbot->add_option("--dataset", rbot_root, "dataset root")->required();
  rbot->add_option("--object", rbot_objects_arg,
                   "object name(s); default: all");
  rbot->add_option("--sequence", rbot_sequence, "sequence prefix");
  rbot->add_option("--pose-scale", pose_scale,
                   "ground-truth translation unit in meters");
  rbot->add_option("--config", rbot_config, "JSON configuration");
  rbot->add_option("--jobs", jobs, "parallel sequence evaluations");

  // evaluate-opt
  auto *opt = app.add_subcommand("evaluate-opt",
                                 "AUC protocol on an OPT-style dataset "
                                 "directory");
  std::string opt_root, opt_object, opt_sequence, opt_config;
  opt->add_option("--dataset", opt_root, "dataset root")->required();
  opt->add_option("--object", opt_object, "object name")->required();
  opt->add_option("--sequence", opt_sequence, "sequence name")->required();
  opt->add_option("--config", opt_config, "JSON configuration");

  // synthesize
  auto *synth = app.add_subcommand("synthesize",
                                   "Generate a synthetic tracking sequence");
  std::string synth_mesh, synth_shape = "lblock:0.14,0.10,0.05,0.05";
  std::string synth_out, synth_background;
  std::size_t synth_frames = 200;
  unsigned synth_seed = 101;
  double synth_focal = 750.0, synth_distance = 0.62, synth_rot = 15.0;
  double synth_trans = 25.0, synth_noise = 1.5;
  int synth_blur = 1;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--frames", synth_frames, "frame count");
  synth->add_option("--mesh", synth_mesh, "OBJ file (overrides --shape)");
  synth->add_option("--shape", synth_shape,
                    "procedural shape, e.g. box:0.1,0.07,0.05");
  synth->add_option("--seed", synth_seed, "deterministic seed");
  synth->add_option("--background", synth_background,
                    "640x480 PNG; default: procedural clutter");
  synth->add_option("--focal", synth_focal, "focal length [px]");
  synth->add_option("--distance", synth_distance, "object distance [m]");
  synth->add_option("--rot-amplitude", synth_rot, "attitude swing [deg]");
  synth->add_option("--trans-amplitude", synth_trans,
                    "translation swing [mm]");
  synth->add_option("--noise", synth_noise, "sensor noise stddev");
  synth->add_option("--blur", synth_blur, "blur passes");
  std::string synth_export;
  synth->add_option("--export-mesh", synth_export,
                    "also write the rendered mesh as OBJ");

  // overlay
  auto *overlay = app.add_subcommand(
      "overlay", "Draw a posed model contour onto an image");
  std::string ov_image, ov_mesh, ov_calib, ov_out = "overlay.png";
  std::vector<double> ov_pose;
  overlay->add_option("--image", ov_image, "input PNG")->required();
  overlay->add_option("--mesh", ov_mesh, "OBJ file")->required();
  overlay->add_option("--pose", ov_pose,
                      "12 values: r11..r33 row-major, tx, ty, tz")
      ->expected(12)
      ->required();
  overlay->add_option("--calibration", ov_calib, "calibration file")
      ->required();
  overlay->add_option("--out", ov_out, "output PNG");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return run_build_model(mesh_path, out_path, n_points, subdivisions,
                             radius, seed);
    if (track->parsed())
      return run_track(config_path, frames_dir, poses_out, report_out);
    if (rbot->parsed())
      return run_evaluate_rbot(rbot_root, rbot_objects_arg, rbot_sequence,
                               pose_scale, rbot_config, jobs);
    if (opt->parsed())
      return run_evaluate_opt(opt_root, opt_object, opt_sequence, opt_config);
    if (synth->parsed())
      return run_synthesize(synth_mesh, synth_shape, synth_out, synth_frames,
                            synth_seed, synth_background, synth_focal,
                            synth_distance, synth_rot, synth_trans,
                            synth_noise, synth_blur, synth_export);
    if (overlay->parsed())
      return run_overlay(ov_image, ov_mesh, ov_pose, ov_calib, ov_out);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
