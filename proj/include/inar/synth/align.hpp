#pragma once

#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::synth {

using geom::Pose;
using Eigen::Matrix3d;
using Eigen::Vector3d;

// Similarity transform y = scale * R * x + t.
struct Similarity {
  double scale = 1.0;
  Matrix3d R = Matrix3d::Identity();
  Vector3d t = Vector3d::Zero();

  Vector3d apply(const Vector3d& x) const { return scale * (R * x) + t; }
  Similarity inverse() const {
    Similarity inv;
    inv.scale = 1.0 / scale;
    inv.R = R.transpose();
    inv.t = -(inv.scale * (inv.R * t));
    return inv;
  }
  static Similarity compose(const Similarity& outer, const Similarity& inner) {
    Similarity c;
    c.scale = outer.scale * inner.scale;
    c.R = outer.R * inner.R;
    c.t = outer.scale * (outer.R * inner.t) + outer.t;
    return c;
  }
};

struct AlignmentResult {
  Similarity transform;  // maps the estimated frame onto the reference frame
  double rmse = 0.0;     // after alignment, in reference units
};

// Closed-form least-squares similarity between correspondent point sets
// (centroids, covariance SVD, scale from the variance ratio). Needs >= 3
// non-collinear points; throws DegenerateFit otherwise.
AlignmentResult align_similarity(const std::vector<Vector3d>& estimated,
                                 const std::vector<Vector3d>& reference);

}  // namespace inar::synth
