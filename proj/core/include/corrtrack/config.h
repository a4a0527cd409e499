#pragma once

#include <string>
#include <vector>

#include "corrtrack/tracker.h"
#include "corrtrack/viewpoint_model.h"

namespace corrtrack {

/// Per-object entry of the JSON configuration.
struct ObjectSpec {
  std::string name;
  std::string mesh_path;
  std::string model_cache;  // optional viewpoint-model cache file
  Pose initial_pose;
  bool has_initial_pose = false;
  ObjectOverrides overrides;
  bool optimize = true;
};

struct AppConfig {
  TrackerConfig tracker;
  ViewpointModelConfig model;
  std::vector<ObjectSpec> objects;
};

/// Reads the JSON configuration; missing fields keep their defaults.
AppConfig load_config(const std::string &path);

}  // namespace corrtrack
