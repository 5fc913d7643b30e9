#pragma once

#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::geom {

struct Observation {
  CameraIntrinsics K;
  Pose pose;
  Vector2d pixel;
};

struct TriangulationResult {
  Vector3d point = Vector3d::Zero();
  double mean_reprojection_px = 0.0;
};

// Largest pairwise angle between the observation rays, radians.
double max_ray_angle(const std::vector<Observation>& obs);

// Homogeneous DLT over >= 2 views. Throws DegenerateTriangulation when all
// camera centers coincide (baseline <= baseline_eps) or the rays are
// near-parallel (max pairwise angle < min_angle_rad), BehindCameraMajority
// when the solution is behind the camera in at least half the views.
TriangulationResult triangulate_dlt(const std::vector<Observation>& obs,
                                    double baseline_eps = 1e-12, double min_angle_rad = 1e-4);

// No-throw variant for reconstruction loops: returns false instead of
// throwing, with the failure kind in *why (0 ok, 1 degenerate, 2 cheirality).
bool triangulate_dlt_checked(const std::vector<Observation>& obs, double baseline_eps,
                             double min_angle_rad, TriangulationResult* out, int* why);

}  // namespace inar::geom
