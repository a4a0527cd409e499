// Per-step cost of the tracker on 640x480 synthetic imagery, plus the main
// building blocks (distribution evaluation, model lookup, rendering).

#include <benchmark/benchmark.h>

#include "corrtrack/primitives.h"
#include "corrtrack/synthetic.h"
#include "corrtrack/tracker.h"

using namespace corrtrack;

namespace {

struct BenchScene {
  TriangleMesh mesh = make_l_block(0.14, 0.10, 0.05, 0.05);
  SparseViewpointModel model;
  Intrinsics intrinsics{750.0, 750.0, 319.5, 239.5, 640, 480};
  Pose pose;
  ImageRGB image;
  TrackerConfig config;

  BenchScene() {
    ViewpointModelConfig model_config;
    model_config.seed = 3;
    model = build_model(mesh, model_config);
    pose.rotation = exp_map({0.35, 0.25, 0.15});
    pose.translation = {0.0, -0.01, 0.62};
    ImageRGB background = make_clutter_background(640, 480, 101);
    image = render_over_background(
        mesh, make_face_colors(mesh.triangles.size(), 102), pose, intrinsics,
        background);
    apply_imaging(image, {}, 5);
    config.step_params = {0.42, 0.5};
  }
};

const BenchScene &bench_scene() {
  static const BenchScene scene;
  return scene;
}

}  // namespace

static void BM_TrackStep(benchmark::State &state) {
  const BenchScene &scene = bench_scene();
  Tracker tracker{scene.config, scene.intrinsics};
  std::vector<TrackedObject> objects(1);
  objects[0].mesh = &scene.mesh;
  objects[0].model = &scene.model;
  objects[0].overrides.lambda_r = 100000.0;
  tracker.initialize(objects[0], scene.image, scene.pose);
  for (auto _ : state) {
    tracker.track_step(objects, scene.image);
    benchmark::DoNotOptimize(objects[0].pose);
  }
}
BENCHMARK(BM_TrackStep)->Unit(benchmark::kMillisecond);

static void BM_TrackStepWithOcclusionMasks(benchmark::State &state) {
  const BenchScene &scene = bench_scene();
  TrackerConfig config = scene.config;
  config.use_occlusion_masks = true;
  Tracker tracker{config, scene.intrinsics};
  std::vector<TrackedObject> objects(1);
  objects[0].mesh = &scene.mesh;
  objects[0].model = &scene.model;
  tracker.initialize(objects[0], scene.image, scene.pose);
  for (auto _ : state) {
    tracker.track_step(objects, scene.image);
    benchmark::DoNotOptimize(objects[0].pose);
  }
}
BENCHMARK(BM_TrackStepWithOcclusionMasks)->Unit(benchmark::kMillisecond);

static void BM_ClosestView(benchmark::State &state) {
  const BenchScene &scene = bench_scene();
  for (auto _ : state)
    benchmark::DoNotOptimize(closest_view(scene.model, scene.pose));
}
BENCHMARK(BM_ClosestView);

static void BM_PosteriorDistribution(benchmark::State &state) {
  const StepFunctionTable table{{0.42, 0.5}};
  const auto support = make_support(12);
  CorrespondenceLine line = setup_line({320.0, 240.0}, {1.0, 0.0}, 1, 9);
  line.segment_fg_posteriors.assign(19, 0.0);
  for (int i = 0; i < 9; ++i) line.segment_fg_posteriors[i] = 0.9;
  line.segment_fg_posteriors[9] = 0.5;
  for (int i = 10; i < 19; ++i) line.segment_fg_posteriors[i] = 0.1;
  line.valid = true;
  for (auto _ : state)
    benchmark::DoNotOptimize(posterior_distribution(line, table, support));
}
BENCHMARK(BM_PosteriorDistribution);

static void BM_RenderDepth(benchmark::State &state) {
  const BenchScene &scene = bench_scene();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        render_depth(scene.mesh, scene.pose, scene.intrinsics));
}
BENCHMARK(BM_RenderDepth)->Unit(benchmark::kMillisecond);

static void BM_OcclusionMask(benchmark::State &state) {
  const BenchScene &scene = bench_scene();
  const std::vector<SceneObject> objects{{&scene.mesh, scene.pose}};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        render_occlusion_mask(objects, scene.intrinsics, 4, 4));
}
BENCHMARK(BM_OcclusionMask)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
