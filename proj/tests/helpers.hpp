#pragma once

#include <random>
#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::testing {

using geom::CameraIntrinsics;
using geom::Match;
using geom::Pose;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

inline CameraIntrinsics default_intrinsics() {
  return CameraIntrinsics{525.0, 525.0, 320.0, 240.0, 640, 480};
}

inline Matrix3d rot_x(double a) {
  Matrix3d m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}
inline Matrix3d rot_y(double a) {
  Matrix3d m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}
inline Matrix3d rot_z(double a) {
  Matrix3d m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

// World-to-camera pose for a camera at `center` looking at `target`,
// +z forward, +y down-ish.
inline Pose look_at(const Vector3d& center, const Vector3d& target,
                    const Vector3d& up_hint = Vector3d(0, -1, 0)) {
  const Vector3d forward = (target - center).normalized();
  Vector3d right = forward.cross(up_hint).normalized();
  if (right.norm() < 1e-9) right = forward.cross(Vector3d(1, 0, 0)).normalized();
  const Vector3d down = forward.cross(right).normalized();
  Matrix3d r_wc;  // rows: camera axes in world coordinates
  r_wc.row(0) = right.transpose();
  r_wc.row(1) = down.transpose();
  r_wc.row(2) = forward.transpose();
  return Pose{r_wc, -(r_wc * center)};
}

// Cameras on a horizontal arc of given radius around `target`, facing it.
inline std::vector<Pose> arc_rig(int count, double radius, double span_rad,
                                 const Vector3d& target = Vector3d::Zero()) {
  std::vector<Pose> poses;
  for (int i = 0; i < count; ++i) {
    const double a =
        count == 1 ? 0.0 : -span_rad / 2 + span_rad * static_cast<double>(i) / (count - 1);
    const Vector3d center =
        target + radius * Vector3d(std::sin(a), 0.0, -std::cos(a));
    poses.push_back(look_at(center, target));
  }
  return poses;
}

inline std::vector<Vector3d> random_points_in_box(int n, const Vector3d& lo, const Vector3d& hi,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y()),
      uz(lo.z(), hi.z());
  std::vector<Vector3d> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.emplace_back(ux(rng), uy(rng), uz(rng));
  return pts;
}

// Exact two-view matches for points visible in both views.
inline std::vector<Match> exact_matches(const CameraIntrinsics& k, const Pose& pa, const Pose& pb,
                                        const std::vector<Vector3d>& points) {
  std::vector<Match> matches;
  int idx = 0;
  for (const Vector3d& x : points) {
    Vector2d a, b;
    if (geom::project_checked(k, pa, x, &a) && geom::project_checked(k, pb, x, &b)) {
      matches.push_back(Match{a, b, idx, idx});
      ++idx;
    }
  }
  return matches;
}

}  // namespace inar::testing
