#include "corrtrack/config.h"

#include <fstream>

#include <json.hpp>

namespace corrtrack {

namespace {

using nlohmann::json;

Pose parse_pose(const json &value) {
  if (!value.is_array() || value.size() != 12)
    throw Error{"load_config: initial_pose must hold 12 values "
                "(r11..r33 row-major, tx, ty, tz)"};
  Pose pose;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      pose.rotation(row, col) = value[row * 3 + col].get<double>();
  pose.translation = Vector3d{value[9].get<double>(), value[10].get<double>(),
                              value[11].get<double>()};
  return pose;
}

}  // namespace

AppConfig load_config(const std::string &path) {
  std::ifstream file{path};
  if (!file) throw Error{"load_config: cannot open " + path};
  json root;
  try {
    file >> root;
  } catch (const json::exception &e) {
    throw Error{"load_config: " + std::string{e.what()}};
  }

  AppConfig config;
  TrackerConfig &t = config.tracker;
  if (root.contains("scales"))
    t.scales = root["scales"].get<std::vector<int>>();
  t.inner_iterations = root.value("inner_iterations", t.inner_iterations);
  t.step_params.amplitude =
      root.value("step_amplitude", t.step_params.amplitude);
  t.step_params.slope = root.value("step_slope", t.step_params.slope);
  t.optimizer.lambda_r = root.value("lambda_r", t.optimizer.lambda_r);
  t.optimizer.lambda_t = root.value("lambda_t", t.optimizer.lambda_t);
  t.optimizer.step_size = root.value("step_size", t.optimizer.step_size);
  t.support_size = root.value("support_size", t.support_size);
  t.min_continuous_distance_segments =
      root.value("min_continuous_distance_segments",
                 t.min_continuous_distance_segments);
  t.min_valid_lines = root.value("min_valid_lines", t.min_valid_lines);
  t.use_occlusion_masks =
      root.value("use_occlusion_masks", t.use_occlusion_masks);
  t.occlusion_downscale =
      root.value("occlusion_downscale", t.occlusion_downscale);
  t.occlusion_radius = root.value("occlusion_radius", t.occlusion_radius);
  if (root.contains("histogram")) {
    const json &h = root["histogram"];
    t.learning_rate_fg = h.value("learning_rate_fg", t.learning_rate_fg);
    t.learning_rate_bg = h.value("learning_rate_bg", t.learning_rate_bg);
    t.histogram_sampling.offset_px =
        h.value("offset_px", t.histogram_sampling.offset_px);
    t.histogram_sampling.max_px = h.value("max_px", t.histogram_sampling.max_px);
  }

  if (root.contains("model")) {
    const json &m = root["model"];
    config.model.n_points = m.value("n_points", config.model.n_points);
    config.model.subdivisions =
        m.value("subdivisions", config.model.subdivisions);
    config.model.sphere_radius =
        m.value("sphere_radius", config.model.sphere_radius);
    config.model.seed = m.value("seed", config.model.seed);
  }

  for (const json &entry : root.value("objects", json::array())) {
    ObjectSpec spec;
    spec.name = entry.value("name", std::string{});
    spec.mesh_path = entry.at("mesh").get<std::string>();
    spec.model_cache = entry.value("model_cache", std::string{});
    spec.optimize = entry.value("optimize", true);
    if (entry.contains("initial_pose")) {
      spec.initial_pose = parse_pose(entry["initial_pose"]);
      spec.has_initial_pose = true;
    }
    if (entry.contains("overrides")) {
      const json &o = entry["overrides"];
      if (o.contains("lambda_r"))
        spec.overrides.lambda_r = o["lambda_r"].get<double>();
      if (o.contains("lambda_t"))
        spec.overrides.lambda_t = o["lambda_t"].get<double>();
    }
    config.objects.push_back(std::move(spec));
  }
  return config;
}

}  // namespace corrtrack
