#pragma once

#include <cstdint>
#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::geom {

// Essential matrix for normalized coordinates, x_b' E x_a = 0. Stored
// projected onto the essential manifold with singular values (1, 1, 0),
// i.e. ||E||_F = sqrt(2).
struct EssentialMatrix {
  Matrix3d E = Matrix3d::Zero();
};

// Projects an arbitrary 3x3 matrix onto the essential manifold: singular
// values replaced by (s, s, 0) with s the mean of the top two, then scaled
// to Frobenius norm sqrt(2).
EssentialMatrix project_to_essential(const Matrix3d& m);

// Normalized eight-point algorithm (Hartley normalization on K-normalized
// coordinates). Throws DegenerateConfiguration when the design matrix is
// rank-deficient (pure rotation, coplanar-with-centers configurations).
EssentialMatrix essential_8pt(const std::vector<Match>& matches, const CameraIntrinsics& ka,
                              const CameraIntrinsics& kb);

// Squared first-order (Sampson) epipolar error in normalized coordinates.
double sampson_distance(const EssentialMatrix& e, const Vector2d& xa_norm,
                        const Vector2d& xb_norm);
double sampson_distance(const EssentialMatrix& e, const Match& m, const CameraIntrinsics& ka,
                        const CameraIntrinsics& kb);

// Relative pose of view B w.r.t. view A with ||t|| = 1, chosen among the
// four (R, +-t) candidates by the cheirality vote over the given matches.
// Matches whose rays are near-parallel (angle < abstain_angle_rad) abstain.
// Throws CheiralityAmbiguous when no candidate wins a strict majority.
Pose decompose_essential(const EssentialMatrix& e, const std::vector<Match>& matches,
                         const CameraIntrinsics& ka, const CameraIntrinsics& kb,
                         double abstain_angle_rad = 1e-6);

struct RansacResult {
  EssentialMatrix essential;
  std::vector<std::uint8_t> inlier_mask;  // one flag per input match
  int inlier_count = 0;
  int iterations_run = 0;
};

// Classic RANSAC over eight-point samples. Inlier test: first-order epipolar
// error converted to pixels via the mean focal length, < threshold_px.
// Deterministic for a fixed seed for any thread count: iteration i draws
// from an RNG seeded with seed + i, candidates are scored in fixed blocks,
// ties broken by lowest iteration index. The winning consensus set is
// refitted once with the eight-point solve over all its members.
RansacResult ransac_essential(const std::vector<Match>& matches, const CameraIntrinsics& ka,
                              const CameraIntrinsics& kb, double threshold_px, int max_iters,
                              std::uint64_t seed, double confidence = 0.999);

}  // namespace inar::geom
