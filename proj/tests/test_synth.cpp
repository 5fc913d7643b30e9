#include <doctest.h>

#include <random>
#include <set>

#include "inar/synth/align.hpp"
#include "inar/synth/perturb.hpp"
#include "inar/synth/render.hpp"
#include "inar/synth/scene.hpp"
#include "helpers.hpp"

using namespace inar;
using namespace inar::synth;
using inar::testing::rot_z;

TEST_CASE("build_scene: default museum spec is deterministic and two-class") {
  const SceneSpec spec = SceneSpec::museum_default();
  const Scene a = build_scene(spec, 5);
  const Scene b = build_scene(spec, 5);
  REQUIRE(a.dots.size() == b.dots.size());
  for (size_t i = 0; i < a.dots.size(); ++i) {
    CHECK(a.dots[i].position == b.dots[i].position);
    CHECK(a.dots[i].contrast == b.dots[i].contrast);
  }

  bool has_real = false, has_virtual = false;
  for (const auto& dot : a.dots) {
    const PointLabel label = a.primitives[dot.primitive]->label;
    has_real |= label == PointLabel::kReal;
    has_virtual |= label == PointLabel::kVirtualBackdrop;
  }
  CHECK(has_real);
  CHECK(has_virtual);

  const Scene c = build_scene(spec, 6);
  CHECK(a.dots[0].position != c.dots[0].position);
}

TEST_CASE("build_scene: object outside vault raises InvalidSpec") {
  SceneSpec spec = SceneSpec::museum_default();
  ObjectSpec far_box;
  far_box.kind = ObjectSpec::Kind::kBox;
  far_box.placed_auto = false;
  far_box.center = Eigen::Vector3d(30.0, 0.0, 0.0);
  far_box.size = 1.0;
  spec.objects.push_back(far_box);
  CHECK_THROWS_AS(build_scene(spec, 1), InvalidSpec);
}

TEST_CASE("build_scene: tiny rig raises InvalidSpec") {
  SceneSpec spec = SceneSpec::museum_default();
  spec.rig.count = 1;
  CHECK_THROWS_AS(build_scene(spec, 1), InvalidSpec);
}

TEST_CASE("scene spec JSON round trip") {
  const SceneSpec spec = SceneSpec::museum_default();
  const SceneSpec back = SceneSpec::from_json_text(spec.to_json_text());
  CHECK(back.name == spec.name);
  REQUIRE(back.vault.has_value());
  CHECK(back.vault->radius == spec.vault->radius);
  CHECK(back.objects.size() == spec.objects.size());
  CHECK(back.rig.count == spec.rig.count);
  CHECK(back.texture_density == spec.texture_density);

  const SceneSpec neg = SceneSpec::negative_control();
  const SceneSpec neg_back = SceneSpec::from_json_text(neg.to_json_text());
  CHECK(!neg_back.vault.has_value());
  CHECK(neg_back.wall.kind == WallSpec::Kind::kCorrugated);
}

TEST_CASE("ground truth: every correspondence reprojects exactly") {
  const Scene scene = build_scene(SceneSpec::museum_default(), 1);
  const GroundTruth truth = ground_truth_only(scene);
  REQUIRE(truth.points.size() > 500);

  for (const auto& point : truth.points) {
    for (const auto& [cam, pixel] : point.observations) {
      const Eigen::Vector2d reproj =
          geom::project(truth.intrinsics, truth.poses[cam], point.position);
      CHECK((reproj - pixel).norm() < 1e-12);
    }
  }
}

TEST_CASE("ground truth: default spec keeps only points visible in >= 3 views") {
  const Scene scene = build_scene(SceneSpec::museum_default(), 2);
  const GroundTruth truth = ground_truth_only(scene);
  for (const auto& point : truth.points) {
    CHECK(point.observations.size() >= 3);
  }
}

TEST_CASE("ground truth: occluded points are absent from the camera's observations") {
  // A scene with one box in front of a vault: dots on the vault that project
  // inside the box silhouette of some camera must not be observed there.
  SceneSpec spec = SceneSpec::museum_default();
  spec.objects.clear();
  ObjectSpec box;
  box.kind = ObjectSpec::Kind::kBox;
  box.placed_auto = false;
  box.center = Eigen::Vector3d(0.0, -0.2, 0.0);
  box.size = 1.1;
  spec.objects.push_back(box);
  const Scene scene = build_scene(spec, 3);
  const GroundTruth truth = ground_truth_only(scene);

  // Count vault points hidden in some view where they project in-bounds with
  // positive depth; occlusion must be the only reason for their absence.
  int occluded_cases = 0;
  for (const auto& point : truth.points) {
    if (point.label != PointLabel::kVirtualBackdrop) continue;
    for (size_t cam = 0; cam < truth.poses.size(); ++cam) {
      if (point.observations.count(static_cast<int>(cam))) continue;
      Eigen::Vector2d pix;
      if (!geom::project_checked(truth.intrinsics, truth.poses[cam], point.position, &pix)) {
        continue;
      }
      if (!truth.intrinsics.contains(pix)) continue;
      // In-bounds and in front, yet unobserved: verify a nearer surface blocks it.
      const Eigen::Vector3d origin = truth.poses[cam].center();
      const Eigen::Vector3d dir = (point.position - origin).normalized();
      double t;
      Eigen::Vector3d n;
      const int hit = scene.raycast(origin, dir, 1e-9, &t, &n);
      REQUIRE(hit >= 0);
      CHECK(t < (point.position - origin).norm() * (1.0 - 1e-9));
      ++occluded_cases;
    }
  }
  CHECK(occluded_cases > 0);
}

TEST_CASE("render_views: rasters are deterministic and textured") {
  SceneSpec spec = SceneSpec::museum_default();
  spec.rig.count = 3;  // keep the test cheap
  spec.min_views_keep = 2;
  const Scene scene = build_scene(spec, 4);
  const RenderedViews a = render_views(scene);
  const RenderedViews b = render_views(scene);
  REQUIRE(a.color.size() == 3);
  CHECK(a.color[1].rgb == b.color[1].rgb);

  // Texture sanity: the image must have substantial local contrast.
  const ImageGray& g = a.gray[1];
  double max_grad = 0.0;
  for (int y = 1; y < g.height - 1; ++y) {
    for (int x = 1; x < g.width - 1; ++x) {
      max_grad = std::max(max_grad, std::abs(static_cast<double>(g.at(x + 1, y)) - g.at(x - 1, y)));
    }
  }
  CHECK(max_grad > 40.0);
}

TEST_CASE("perturb: zero settings are the identity") {
  const Scene scene = build_scene(SceneSpec::museum_default(), 1);
  const GroundTruth truth = ground_truth_only(scene);
  const auto tracks = tracks_from_truth(truth);
  const PerturbedTracks p = perturb(tracks, truth.intrinsics, 0.0, 0.0, 9);
  REQUIRE(p.tracks.size() == tracks.size());
  for (size_t i = 0; i < tracks.size(); ++i) {
    CHECK(p.corrupted[i].empty());
    for (const auto& [cam, pix] : tracks[i].observations) {
      CHECK(p.tracks[i].observations.at(cam) == pix);
    }
  }
}

TEST_CASE("perturb: displacement statistics match the requested sigma") {
  const Scene scene = build_scene(SceneSpec::museum_default(), 2);
  const GroundTruth truth = ground_truth_only(scene);
  const auto tracks = tracks_from_truth(truth);

  size_t n_obs = 0;
  for (const auto& t : tracks) n_obs += t.observations.size();
  REQUIRE(n_obs >= 10000);

  const double sigma = 0.5;
  const PerturbedTracks p = perturb(tracks, truth.intrinsics, sigma, 0.0, 77);
  double sum_sq = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < tracks.size(); ++i) {
    for (const auto& [cam, pix] : tracks[i].observations) {
      const Eigen::Vector2d d = p.tracks[i].observations.at(cam) - pix;
      sum_sq += d.x() * d.x() + d.y() * d.y();
      count += 2;
    }
  }
  const double measured = std::sqrt(sum_sq / count);
  CHECK(measured > 0.45);
  CHECK(measured < 0.55);
}

TEST_CASE("perturb: corruption rate matches the Bernoulli parameter") {
  const Scene scene = build_scene(SceneSpec::museum_default(), 3);
  const GroundTruth truth = ground_truth_only(scene);
  const auto tracks = tracks_from_truth(truth);

  size_t n_obs = 0;
  for (const auto& t : tracks) n_obs += t.observations.size();
  REQUIRE(n_obs >= 10000);

  const PerturbedTracks p = perturb(tracks, truth.intrinsics, 0.0, 0.3, 78);
  size_t corrupted = 0;
  for (const auto& c : p.corrupted) corrupted += c.size();
  const double rate = static_cast<double>(corrupted) / static_cast<double>(n_obs);
  CHECK(rate > 0.27);
  CHECK(rate < 0.33);
}

TEST_CASE("align_similarity: recovers a known transform exactly") {
  const auto reference =
      testing::random_points_in_box(40, {-2, -1, -3}, {2, 1, 3}, 21);
  Similarity applied;
  applied.scale = 2.0;
  applied.R = rot_z(30.0 * M_PI / 180.0);
  applied.t = Eigen::Vector3d(1, 2, 3);

  std::vector<Eigen::Vector3d> estimated;
  for (const auto& x : reference) estimated.push_back(applied.apply(x));

  const AlignmentResult res = align_similarity(estimated, reference);
  CHECK(res.rmse < 1e-9);
  const Similarity round = Similarity::compose(res.transform, applied);
  CHECK(std::abs(round.scale - 1.0) < 1e-9);
  CHECK((round.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(round.t.norm() < 1e-9);
}

TEST_CASE("align_similarity: identical sets give the identity") {
  const auto pts = testing::random_points_in_box(25, {-1, -1, -1}, {1, 1, 1}, 22);
  const AlignmentResult res = align_similarity(pts, pts);
  CHECK(res.rmse < 1e-12);
  CHECK(std::abs(res.transform.scale - 1.0) < 1e-12);
  CHECK((res.transform.R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(res.transform.t.norm() < 1e-12);
}

TEST_CASE("align_similarity: invariant to pre-applied similarities") {
  const auto reference = testing::random_points_in_box(30, {-2, -2, -2}, {2, 2, 2}, 23);
  std::vector<Eigen::Vector3d> estimated = reference;
  const AlignmentResult base = align_similarity(estimated, reference);

  Similarity pre;
  pre.scale = 0.4;
  pre.R = rot_z(1.1);
  pre.t = Eigen::Vector3d(-3, 0.5, 2);
  std::vector<Eigen::Vector3d> transformed;
  for (const auto& x : estimated) transformed.push_back(pre.apply(x));

  const AlignmentResult res = align_similarity(transformed, reference);
  CHECK(std::abs(res.rmse - base.rmse) < 1e-9);
  const Similarity recomposed = Similarity::compose(res.transform, pre);
  CHECK(std::abs(recomposed.scale - base.transform.scale) < 1e-9);
  CHECK((recomposed.R - base.transform.R).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((recomposed.t - base.transform.t).norm() < 1e-9);
}

TEST_CASE("align_similarity: collinear points raise DegenerateFit") {
  std::vector<Eigen::Vector3d> line;
  for (int i = 0; i < 10; ++i) line.emplace_back(i * 0.5, 1.0 + i, 2.0 * i);
  CHECK_THROWS_AS(align_similarity(line, line), DegenerateFit);
}
