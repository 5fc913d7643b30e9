#pragma once

#include <map>

#include "inar/image.hpp"
#include "inar/synth/scene.hpp"

namespace inar::synth {

struct GroundTruthPoint {
  int id = -1;
  Vector3d position = Vector3d::Zero();
  PointLabel label = PointLabel::kReal;
  int primitive = -1;
  std::map<int, Vector2d> observations;  // camera index -> exact pixel
};

struct GroundTruth {
  CameraIntrinsics intrinsics;
  std::vector<Pose> poses;
  std::vector<GroundTruthPoint> points;
};

struct RenderedViews {
  std::vector<ImageRGB> color;
  std::vector<ImageGray> gray;
  GroundTruth truth;
};

// Pinhole raycast renders of every rig camera plus exact correspondences.
// Occlusion is evaluated against the analytic primitives, never against the
// rendered rasters, and a point enters the ground truth only when it is
// visible in at least scene.spec.min_views_keep views.
RenderedViews render_views(const Scene& scene);

// Ground truth without rasters (fast path for reconstruction-only suites).
GroundTruth ground_truth_only(const Scene& scene);

}  // namespace inar::synth
