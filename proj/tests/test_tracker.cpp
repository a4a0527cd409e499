#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corrtrack/metrics.h"
#include "corrtrack/rasterizer.h"
#include "corrtrack/primitives.h"
#include "corrtrack/synthetic.h"
#include "corrtrack/tracker.h"
#include "support/test_utils.h"

using namespace corrtrack;

namespace {

// Shared scene, built once: an L-shaped block over a cluttered background
// observed by a desk-scale camera, with camera-like blur and noise.
struct Scene {
  TriangleMesh mesh = make_l_block(0.14, 0.10, 0.05, 0.05);
  SparseViewpointModel model;
  Intrinsics intrinsics{750.0, 750.0, 319.5, 239.5, 640, 480};
  Pose gt_pose;
  ImageRGB background = make_clutter_background(640, 480, 77);
  std::vector<Color> face_colors;
  ImageRGB image;

  Scene() {
    ViewpointModelConfig config;
    config.n_points = 200;
    config.seed = 1;
    model = build_model(mesh, config);
    gt_pose.rotation = exp_map({0.35, 0.25, 0.15});
    gt_pose.translation = {0.01, -0.02, 0.62};
    face_colors = make_face_colors(mesh.triangles.size(), 9);
    image = render_at(gt_pose);
  }

  // Noiseless scene: antialiased and blurred, but without sensor noise.
  ImageRGB render_at(const Pose &pose) const {
    ImageRGB frame = render_over_background(mesh, face_colors, pose,
                                            intrinsics, background);
    apply_imaging(frame, ImagingConfig{1, 0.0}, 5);
    return frame;
  }

  // Step-function parameters for real-camera-like imagery plus a raised
  // rotational regularization for the flat block geometry.
  TrackerConfig tracker_config() const {
    TrackerConfig config;
    config.step_params = {0.42, 0.5};
    return config;
  }
};

const Scene &scene() {
  static const Scene instance;
  return instance;
}

TrackedObject make_object(const Scene &s) {
  TrackedObject object;
  object.mesh = &s.mesh;
  object.model = &s.model;
  object.id = 0;
  object.overrides.lambda_r = 100000.0;
  return object;
}

Pose perturb(const Pose &pose, const Vector3d &axis, double angle,
             const Vector3d &shift) {
  VariationVector theta;
  theta.theta_r = axis.normalized() * angle;
  theta.theta_t = shift;
  return update_pose(pose, theta);
}

}  // namespace

TEST_CASE("initialize sets the pose and fills the histograms") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  TrackedObject object = make_object(s);
  tracker.initialize(object, s.image, s.gt_pose);
  CHECK(object.histograms.initialized());
  CHECK(object.pose.rotation.isApprox(s.gt_pose.rotation, 1e-15));

  // Foreground mass concentrates on the bins actually present inside the
  // (blurred, noisy) silhouette.
  const DepthImage depth = render_depth(s.mesh, s.gt_pose, s.intrinsics);
  std::vector<bool> interior_bins(ColorHistograms::kBinCount, false);
  for (int y = 0; y < depth.height(); ++y)
    for (int x = 0; x < depth.width(); ++x)
      if (depth.at(x, y) > 0.0f)
        interior_bins[ColorHistograms::flat_bin(s.image.at(x, y))] = true;
  double face_mass = 0.0;
  for (int bin = 0; bin < ColorHistograms::kBinCount; ++bin)
    if (interior_bins[bin]) face_mass += object.histograms.foreground()[bin];
  CHECK(face_mass > 0.9);
}

TEST_CASE("initialize rejects off-screen poses") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  TrackedObject object = make_object(s);
  Pose off_screen = s.gt_pose;
  off_screen.translation += Vector3d{5.0, 0.0, 0.0};
  CHECK_THROWS_AS(tracker.initialize(object, s.image, off_screen), Error);
}

TEST_CASE("initialize twice is idempotent") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  TrackedObject object = make_object(s);
  tracker.initialize(object, s.image, s.gt_pose);
  const auto fg = object.histograms.foreground();
  tracker.initialize(object, s.image, s.gt_pose);
  CHECK(object.histograms.foreground() == fg);
}

TEST_CASE("a correct pose is a fixed point of track_step") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  // Static-scene regime: strong rotational damping suppresses the
  // pixel-quantization dither of the local iterations.
  objects[0].overrides.lambda_r = 2e6;
  tracker.initialize(objects[0], s.image, s.gt_pose);
  tracker.track_step(objects, s.image);
  // The step must barely move an already-correct pose.
  const auto [change_t, change_r] = pose_errors(objects[0].pose, s.gt_pose);
  CHECK(change_t < 1e-3);
  CHECK(change_r < 0.1 * M_PI / 180.0);
}

TEST_CASE("track_step recovers a 5 mm / 2 degree perturbation") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  tracker.initialize(objects[0], s.image, s.gt_pose);
  objects[0].pose = perturb(s.gt_pose, {0.2, 1.0, -0.4},
                            2.0 * M_PI / 180.0,
                            Vector3d{0.003, -0.003, 0.002});
  tracker.track_step(objects, s.image);
  const auto [e_t, e_r] = pose_errors(objects[0].pose, s.gt_pose);
  CHECK(e_t < 1e-3);
  CHECK(e_r < 0.5 * M_PI / 180.0);
}

TEST_CASE("pose stays on SE(3) over many steps") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  tracker.initialize(objects[0], s.image, s.gt_pose);
  for (int i = 0; i < 50; ++i) tracker.track_step(objects, s.image);
  CHECK(objects[0].pose.is_valid(1e-7));
}

TEST_CASE("trajectories are bit-identical across runs") {
  const Scene &s = scene();
  auto run = [&] {
    Tracker tracker{s.tracker_config(), s.intrinsics};
    std::vector<TrackedObject> objects{make_object(s)};
    tracker.initialize(objects[0], s.image, s.gt_pose);
    objects[0].pose = perturb(s.gt_pose, {1.0, 0.0,  0.3},
                              1.5 * M_PI / 180.0, Vector3d{0.004, 0.0, -0.002});
    std::vector<Pose> trajectory;
    for (int i = 0; i < 3; ++i) {
      tracker.track_step(objects, s.image);
      trajectory.push_back(objects[0].pose);
    }
    return trajectory;
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].rotation == b[i].rotation);
    CHECK(a[i].translation == b[i].translation);
  }
}

TEST_CASE("the scale schedule is honored") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  tracker.initialize(objects[0], s.image, s.gt_pose);
  const auto results = tracker.track_step(objects, s.image);
  REQUIRE(results.size() == 1);
  REQUIRE(results[0].iterations.size() == 7);
  const std::vector<int> expected{5, 2, 2, 1, 1, 1, 1};
  for (int i = 0; i < 7; ++i)
    CHECK(results[0].iterations[i].scale == expected[i]);
}

TEST_CASE("refinement is monotone on noiseless imagery") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  tracker.initialize(objects[0], s.image, s.gt_pose);
  objects[0].pose = perturb(s.gt_pose, {0.5, -0.2, 1.0},
                            2.0 * M_PI / 180.0, Vector3d{0.004, 0.002, 0.0});
  const auto results = tracker.track_step(objects, s.image);
  const auto &iterations = results[0].iterations;
  REQUIRE(iterations.size() == 7);
  CHECK(iterations.back().mean_abs_distance <=
        iterations.front().mean_abs_distance);
}

TEST_CASE("define_lines produces unit normals and drops border lines") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  TrackedObject object = make_object(s);
  object.pose = s.gt_pose;
  const View &view = s.model.views[closest_view(s.model, object.pose)];
  const auto lines = tracker.define_lines(object, view, 2);
  CHECK(lines.size() > 150);
  for (const auto &line : lines)
    CHECK(line.normal.norm() == doctest::Approx(1.0).epsilon(1e-9));

  // Near the border most centers project outside and the count drops.
  TrackedObject near_border = make_object(s);
  near_border.pose = s.gt_pose;
  near_border.pose.translation += Vector3d{0.33, 0.0, 0.0};
  const View &border_view =
      s.model.views[closest_view(s.model, near_border.pose)];
  const auto border_lines = tracker.define_lines(near_border, border_view, 2);
  CHECK(border_lines.size() < lines.size());
}

TEST_CASE("occlusion masks reject hidden correspondence lines") {
  const Scene &s = scene();

  // A bar in front of the object hides part of its contour.
  const TriangleMesh bar = make_cuboid(0.2, 0.02, 0.01);
  Pose bar_pose;
  bar_pose.translation = {0.0, 0.0, 0.45};

  TrackerConfig config = s.tracker_config();
  config.use_occlusion_masks = true;
  Tracker tracker{config, s.intrinsics};

  TrackedObject object = make_object(s);
  object.pose = s.gt_pose;
  object.id = 0;

  const View &view = s.model.views[closest_view(s.model, object.pose)];
  const OcclusionMask mask = render_occlusion_mask(
      {{&s.mesh, s.gt_pose, 0}, {&bar, bar_pose, 1}}, s.intrinsics, 4, 4);
  const auto unmasked = tracker.define_lines(object, view, 2, nullptr);
  const auto masked = tracker.define_lines(object, view, 2, &mask);
  CHECK(masked.size() < unmasked.size());
  CHECK(masked.size() > 0);
}

TEST_CASE("static objects keep their pose but occupy the occlusion mask") {
  const Scene &s = scene();
  TrackerConfig config = s.tracker_config();
  config.use_occlusion_masks = true;
  Tracker tracker{config, s.intrinsics};

  std::vector<TrackedObject> objects{make_object(s), make_object(s)};
  objects[1].id = 1;
  objects[1].optimize = false;
  objects[1].pose = perturb(s.gt_pose, {0.0, 0.0, 1.0}, 0.3, {0.0, 0.0, 0.2});
  tracker.initialize(objects[0], s.image, s.gt_pose);
  const Pose static_pose = objects[1].pose;
  const auto results = tracker.track_step(objects, s.image);
  CHECK(results[1].pose.rotation == static_pose.rotation);
  CHECK(results[1].pose.translation == static_pose.translation);
  CHECK(results[1].iterations.empty());
}

TEST_CASE("optimizer failure leaves the pose unchanged and is flagged") {
  const Scene &s = scene();
  Tracker tracker{s.tracker_config(), s.intrinsics};
  std::vector<TrackedObject> objects{make_object(s)};
  tracker.initialize(objects[0], s.image, s.gt_pose);
  // Move the object far off-screen: no valid lines anywhere.
  objects[0].pose.translation += Vector3d{3.0, 0.0, 0.0};
  const Pose before = objects[0].pose;
  const auto results = tracker.track_step(objects, s.image);
  CHECK(results[0].optimizer_failed);
  CHECK(results[0].low_line_count);
  CHECK(objects[0].pose.translation == before.translation);
}
