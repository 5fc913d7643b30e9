#include <doctest.h>

#include <random>

#include "inar/geom/camera.hpp"
#include "inar/geom/essential.hpp"
#include "inar/geom/triangulate.hpp"
#include "inar/parallel.hpp"
#include "helpers.hpp"

using namespace inar;
using namespace inar::geom;
using namespace inar::testing;

TEST_CASE("project: optical axis and hand arithmetic") {
  CameraIntrinsics k{1, 1, 0, 0, 10, 10};
  CHECK(project(k, Pose{}, Vector3d(0, 0, 1)) == Vector2d(0, 0));

  CameraIntrinsics k2{100, 100, 50, 50, 200, 200};
  const Vector2d p = project(k2, Pose{}, Vector3d(1, 0, 2));
  CHECK(p.x() == doctest::Approx(100.0));
  CHECK(p.y() == doctest::Approx(50.0));

  CHECK_THROWS_AS(project(k, Pose{}, Vector3d(0, 0, -1)), BehindCamera);
  CHECK_THROWS_AS(project(k, Pose{}, Vector3d(0, 0, 0)), BehindCamera);
}

TEST_CASE("pose: inverse composition is identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector3d w(u(rng), u(rng), u(rng));
    Pose p{axis_angle_to_rotation(w), Vector3d(u(rng), u(rng), u(rng))};
    REQUIRE(p.is_rotation());
    const Pose pinv = p.inverse();
    for (int i = 0; i < 50; ++i) {
      const Vector3d x(u(rng) * 10, u(rng) * 10, u(rng) * 10);
      CHECK((pinv.apply(p.apply(x)) - x).norm() < 1e-12 * (1 + x.norm()));
    }
  }
}

TEST_CASE("triangulate_dlt: recovers ground truth from two noiseless views") {
  const CameraIntrinsics k = default_intrinsics();
  const auto rig = arc_rig(2, 3.0, 30.0 * M_PI / 180.0);
  const Vector3d x_true(0.3, -0.2, 0.8);
  std::vector<Observation> obs;
  for (const Pose& p : rig) obs.push_back({k, p, project(k, p, x_true)});
  const auto result = triangulate_dlt(obs);
  CHECK((result.point - x_true).norm() < 1e-9);
  CHECK(result.mean_reprojection_px < 1e-9);
}

TEST_CASE("triangulate_dlt: zero baseline raises DegenerateTriangulation") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose p = look_at(Vector3d(0, 0, -3), Vector3d::Zero());
  std::vector<Observation> obs{{k, p, Vector2d(320, 240)}, {k, p, Vector2d(321, 241)}};
  CHECK_THROWS_AS(triangulate_dlt(obs), DegenerateTriangulation);
}

TEST_CASE("triangulate_dlt: near-parallel rays raise DegenerateTriangulation") {
  const CameraIntrinsics k = default_intrinsics();
  // Wide baseline but a point so far away that the rays are parallel to
  // within the angle floor.
  const Vector3d x_far(0, 0, 1e9);
  Pose pa = look_at(Vector3d(-0.5, 0, 0), x_far);
  Pose pb = look_at(Vector3d(0.5, 0, 0), x_far);
  std::vector<Observation> obs{{k, pa, project(k, pa, x_far)}, {k, pb, project(k, pb, x_far)}};
  CHECK_THROWS_AS(triangulate_dlt(obs), DegenerateTriangulation);
}

TEST_CASE("triangulate_dlt: behind-camera majority raises") {
  const CameraIntrinsics k = default_intrinsics();
  // Cameras at (-1,0,0) and (1,0,0), both looking +z. The pixel rays
  // (-0.5,0,1) from A and (0.5,0,1) from B meet at (0,0,-2), behind both.
  Pose pa{Matrix3d::Identity(), Vector3d(1, 0, 0)};
  Pose pb{Matrix3d::Identity(), Vector3d(-1, 0, 0)};
  std::vector<Observation> obs{{k, pa, Vector2d(k.cx - 0.5 * k.fx, k.cy)},
                               {k, pb, Vector2d(k.cx + 0.5 * k.fx, k.cy)}};
  CHECK_THROWS_AS(triangulate_dlt(obs), BehindCameraMajority);
}

TEST_CASE("triangulate/project round trip over 20 views") {
  const CameraIntrinsics k = default_intrinsics();
  const auto rig = arc_rig(20, 3.0, 60.0 * M_PI / 180.0);
  const auto points = random_points_in_box(50, Vector3d(-1, -1, -1), Vector3d(1, 1, 1), 11);
  for (const Vector3d& x : points) {
    std::vector<Observation> obs;
    for (const Pose& p : rig) {
      Vector2d pix;
      if (project_checked(k, p, x, &pix)) obs.push_back({k, p, pix});
    }
    REQUIRE(obs.size() >= 2);
    const auto result = triangulate_dlt(obs);
    CHECK(result.mean_reprojection_px < 1e-9);
    for (const Observation& o : obs) {
      CHECK((project(o.K, o.pose, result.point) - o.pixel).norm() < 1e-9);
    }
  }
}

namespace {

std::vector<Match> forward_scene_matches(const CameraIntrinsics& k, const Pose& pose_b, int n,
                                         std::uint64_t seed) {
  const auto points = random_points_in_box(
      4 * n, Vector3d(-1.5, -1.0, 2.0), Vector3d(1.5, 1.0, 6.0), seed);
  auto matches = exact_matches(k, Pose{}, pose_b, points);
  if (static_cast<int>(matches.size()) > n) matches.resize(n);
  return matches;
}

}  // namespace

TEST_CASE("essential_8pt: analytic form for pure x-translation") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b{Matrix3d::Identity(), Vector3d(-1, 0, 0)};  // centers 0 and (1,0,0)
  const auto matches = forward_scene_matches(k, pose_b, 30, 3);
  REQUIRE(matches.size() >= 8);
  const EssentialMatrix e = essential_8pt(matches, k, k);

  // E = [t]x R with R = I, t = -(1,0,0): rows (0,0,0),(0,0,1),(0,-1,0) up to
  // sign and scale.
  Matrix3d expected = skew(pose_b.t) * pose_b.R;
  expected *= std::sqrt(2.0) / expected.norm();
  const double d_plus = (e.E - expected).norm();
  const double d_minus = (e.E + expected).norm();
  CHECK(std::min(d_plus, d_minus) < 1e-9);
  CHECK(std::abs(e.E(0, 0)) < 1e-10);
  CHECK(std::abs(e.E(0, 1)) < 1e-10);
  CHECK(std::abs(e.E(1, 1)) < 1e-10);
}

TEST_CASE("essential_8pt: noiseless matches satisfy epipolar constraint tightly") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b = look_at(Vector3d(0.8, 0.1, 0.2), Vector3d(0, 0, 4));
  const auto matches = forward_scene_matches(k, pose_b, 50, 4);
  REQUIRE(matches.size() == 50);
  const EssentialMatrix e = essential_8pt(matches, k, k);

  double max_sampson = 0.0;
  for (const Match& m : matches) {
    max_sampson = std::max(max_sampson, std::sqrt(sampson_distance(e, m, k, k)));
  }
  CHECK(max_sampson < 1e-10);

  // Essential structure: rank 2, two equal singular values.
  CHECK(std::abs(e.E.determinant()) < 1e-9);
  Eigen::JacobiSVD<Matrix3d> svd(e.E);
  CHECK(svd.singularValues()(0) == doctest::Approx(svd.singularValues()(1)).epsilon(1e-6));
  CHECK(svd.singularValues()(2) < 1e-9);
  CHECK(e.E.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("essential_8pt: rotation-only pair is degenerate") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b{rot_y(0.1), Vector3d::Zero()};
  const auto matches = forward_scene_matches(k, pose_b, 8, 5);
  REQUIRE(matches.size() == 8);
  CHECK_THROWS_AS(essential_8pt(matches, k, k), DegenerateConfiguration);
}

TEST_CASE("sampson_distance: zero on exact and epipolar-line displacements") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b{Matrix3d::Identity(), Vector3d(-1, 0, 0)};
  const auto matches = forward_scene_matches(k, pose_b, 20, 6);
  const EssentialMatrix e = essential_8pt(matches, k, k);

  for (const Match& m : matches) {
    CHECK(sampson_distance(e, m, k, k) < 1e-12);
  }

  // For pure x-translation the epipolar lines are horizontal: sliding the B
  // pixel along x stays on the line.
  Match slid = matches[0];
  slid.pixel_b.x() += 25.0;
  CHECK(sampson_distance(e, slid, k, k) < 1e-12);

  // Perpendicular perturbations grow monotonically.
  double prev = 0.0;
  for (double dy : {0.5, 1.0, 2.0, 4.0}) {
    Match pert = matches[0];
    pert.pixel_b.y() += dy;
    const double d = sampson_distance(e, pert, k, k);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("decompose_essential: recovers known construction, sign-invariant") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b{Matrix3d::Identity(), Vector3d(-1, 0, 0)};
  const auto matches = forward_scene_matches(k, pose_b, 10, 8);
  REQUIRE(matches.size() == 10);

  EssentialMatrix e;
  e.E = skew(pose_b.t) * pose_b.R;
  e.E *= std::sqrt(2.0) / e.E.norm();

  const Pose rec = decompose_essential(e, matches, k, k);
  CHECK((rec.R - pose_b.R).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((rec.t - pose_b.t).norm() < 1e-6);

  EssentialMatrix e_neg;
  e_neg.E = -e.E;
  const Pose rec_neg = decompose_essential(e_neg, matches, k, k);
  CHECK((rec_neg.R - rec.R).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rec_neg.t - rec.t).norm() < 1e-12);
}

TEST_CASE("decompose_essential: far points give CheiralityAmbiguous") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b{Matrix3d::Identity(), Vector3d(-1, 0, 0)};
  // Points so distant that every match abstains from the cheirality vote.
  const auto far_points = random_points_in_box(
      12, Vector3d(-3e7, -2e7, 1e8), Vector3d(3e7, 2e7, 3e8), 9);
  const auto matches = exact_matches(k, Pose{}, pose_b, far_points);
  REQUIRE(matches.size() >= 10);

  EssentialMatrix e;
  e.E = skew(pose_b.t) * pose_b.R;
  e.E *= std::sqrt(2.0) / e.E.norm();
  CHECK_THROWS_AS(decompose_essential(e, matches, k, k), CheiralityAmbiguous);
}

TEST_CASE("ransac_essential: rejects planted outliers") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b = look_at(Vector3d(1.0, 0.0, 0.0), Vector3d(0, 0, 4));
  auto matches = forward_scene_matches(k, pose_b, 70, 12);
  REQUIRE(matches.size() == 70);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(0, k.width - 1), uy(0, k.height - 1);
  std::vector<std::uint8_t> truth(100, 1);
  for (int i = 0; i < 30; ++i) {
    matches.push_back(Match{Vector2d(ux(rng), uy(rng)), Vector2d(ux(rng), uy(rng)), 70 + i, 70 + i});
    truth[70 + i] = 0;
  }

  const RansacResult res = ransac_essential(matches, k, k, 1.0, 500, 42);
  int recalled = 0, admitted_outliers = 0;
  for (int i = 0; i < 100; ++i) {
    if (truth[i] && res.inlier_mask[i]) ++recalled;
    if (!truth[i] && res.inlier_mask[i]) ++admitted_outliers;
  }
  CHECK(recalled >= 67);  // >= 95% of the 70 true matches
  CHECK(admitted_outliers == 0);
}

TEST_CASE("ransac_essential: all-exact input flags everything inlier") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b = look_at(Vector3d(1.0, 0.0, 0.0), Vector3d(0, 0, 4));
  const auto matches = forward_scene_matches(k, pose_b, 40, 13);
  for (std::uint64_t seed : {1ull, 7ull, 123ull}) {
    const RansacResult res = ransac_essential(matches, k, k, 1.0, 500, seed);
    CHECK(res.inlier_count == static_cast<int>(matches.size()));
  }
}

TEST_CASE("ransac_essential: fewer than eight matches raises") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b = look_at(Vector3d(1.0, 0.0, 0.0), Vector3d(0, 0, 4));
  auto matches = forward_scene_matches(k, pose_b, 7, 14);
  matches.resize(7);
  CHECK_THROWS_AS(ransac_essential(matches, k, k, 1.0, 100, 1), InsufficientInliers);
}

TEST_CASE("ransac_essential: bitwise deterministic across thread counts") {
  const CameraIntrinsics k = default_intrinsics();
  const Pose pose_b = look_at(Vector3d(1.0, 0.0, 0.0), Vector3d(0, 0, 4));
  auto matches = forward_scene_matches(k, pose_b, 60, 15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0, k.width - 1), uy(0, k.height - 1);
  for (int i = 0; i < 25; ++i) {
    matches.push_back(Match{Vector2d(ux(rng), uy(rng)), Vector2d(ux(rng), uy(rng)), 0, 0});
  }

  set_serial(true);
  const RansacResult serial = ransac_essential(matches, k, k, 1.0, 400, 42);
  set_serial(false);

  for (int threads : {1, 2, 3, 4}) {
    set_max_threads(threads);
    const RansacResult par = ransac_essential(matches, k, k, 1.0, 400, 42);
    CHECK(par.inlier_mask == serial.inlier_mask);
    CHECK(par.essential.E == serial.essential.E);
    CHECK(par.iterations_run == serial.iterations_run);
  }
  set_max_threads(0);
}
