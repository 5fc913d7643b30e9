#pragma once

#include <Eigen/Dense>

#include "inar/errors.hpp"

namespace inar::geom {

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

// Ideal pinhole, zero distortion. Intrinsics are known and shared per
// capture session; they are never optimized.
struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  bool valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 && cx < width && cy >= 0 &&
           cy < height;
  }

  Vector2d normalize(const Vector2d& pixel) const {
    return {(pixel.x() - cx) / fx, (pixel.y() - cy) / fy};
  }
  Vector2d denormalize(const Vector2d& xn) const {
    return {fx * xn.x() + cx, fy * xn.y() + cy};
  }
  double mean_focal() const { return 0.5 * (fx + fy); }
  bool contains(const Vector2d& pixel) const {
    return pixel.x() >= 0 && pixel.y() >= 0 && pixel.x() < width && pixel.y() < height;
  }
};

// World-to-camera rigid transform: x_cam = R * x_world + t.
struct Pose {
  Matrix3d R = Matrix3d::Identity();
  Vector3d t = Vector3d::Zero();

  Vector3d apply(const Vector3d& x) const { return R * x + t; }
  Pose inverse() const { return Pose{R.transpose(), -(R.transpose() * t)}; }
  Vector3d center() const { return -(R.transpose() * t); }
  // Unit direction of the world-space ray through normalized image point xn.
  Vector3d ray(const Vector2d& xn) const {
    return (R.transpose() * Vector3d(xn.x(), xn.y(), 1.0)).normalized();
  }

  bool is_rotation(double tol = 1e-9) const {
    return ((R.transpose() * R) - Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(R.determinant() - 1.0) <= tol;
  }

  static Pose compose(const Pose& outer, const Pose& inner) {
    // outer after inner: x -> outer.R*(inner.R*x + inner.t) + outer.t
    return Pose{outer.R * inner.R, outer.R * inner.t + outer.t};
  }
};

// One pairwise correspondence in pixel coordinates.
struct Match {
  Vector2d pixel_a = Vector2d::Zero();
  Vector2d pixel_b = Vector2d::Zero();
  int index_a = -1;
  int index_b = -1;
};

inline Matrix3d skew(const Vector3d& v) {
  Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

// Rodrigues exponential map.
inline Matrix3d axis_angle_to_rotation(const Vector3d& w) {
  const double theta2 = w.squaredNorm();
  const Matrix3d W = skew(w);
  if (theta2 < 1e-16) {
    return Matrix3d::Identity() + W + 0.5 * W * W;
  }
  const double theta = std::sqrt(theta2);
  return Matrix3d::Identity() + (std::sin(theta) / theta) * W +
         ((1.0 - std::cos(theta)) / theta2) * W * W;
}

// Nearest rotation in Frobenius norm, det +1.
inline Matrix3d orthonormalize_rotation(const Matrix3d& m) {
  Eigen::JacobiSVD<Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

// Geodesic angle between two rotations, radians.
inline double rotation_angle(const Matrix3d& a, const Matrix3d& b) {
  const double c = ((a.transpose() * b).trace() - 1.0) * 0.5;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

// Camera-frame point for X, without the projection. Used by hot loops that
// need the depth before deciding anything.
inline Vector3d transform_point(const Pose& pose, const Vector3d& x) { return pose.apply(x); }

// No-throw projection used by inner loops; returns false when depth <= 0.
inline bool project_checked(const CameraIntrinsics& K, const Pose& pose, const Vector3d& x,
                            Vector2d* pixel) {
  const Vector3d xc = pose.apply(x);
  if (xc.z() <= 0.0) return false;
  *pixel = {K.fx * xc.x() / xc.z() + K.cx, K.fy * xc.y() / xc.z() + K.cy};
  return true;
}

// Pinhole projection; throws BehindCamera when the depth is non-positive.
inline Vector2d project(const CameraIntrinsics& K, const Pose& pose, const Vector3d& x) {
  Vector2d pixel;
  if (!project_checked(K, pose, x, &pixel)) throw BehindCamera();
  return pixel;
}

}  // namespace inar::geom
