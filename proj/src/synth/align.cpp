#include "inar/synth/align.hpp"

#include <Eigen/SVD>

#include "inar/errors.hpp"

namespace inar::synth {

AlignmentResult align_similarity(const std::vector<Vector3d>& estimated,
                                 const std::vector<Vector3d>& reference) {
  if (estimated.size() != reference.size()) {
    throw DegenerateFit("alignment needs matched point sets");
  }
  const size_t n = estimated.size();
  if (n < 3) throw DegenerateFit("alignment needs at least 3 points");

  Vector3d mu_e = Vector3d::Zero(), mu_r = Vector3d::Zero();
  for (size_t i = 0; i < n; ++i) {
    mu_e += estimated[i];
    mu_r += reference[i];
  }
  mu_e /= static_cast<double>(n);
  mu_r /= static_cast<double>(n);

  Matrix3d cov = Matrix3d::Zero();
  double var_e = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vector3d de = estimated[i] - mu_e;
    const Vector3d dr = reference[i] - mu_r;
    cov += dr * de.transpose();
    var_e += de.squaredNorm();
  }
  cov /= static_cast<double>(n);
  var_e /= static_cast<double>(n);
  if (var_e < 1e-24) throw DegenerateFit("estimated point set has no spread");

  Eigen::JacobiSVD<Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Collinear input leaves the rotation underdetermined.
  if (svd.singularValues()(1) < 1e-12 * svd.singularValues()(0)) {
    throw DegenerateFit("points are collinear");
  }
  Vector3d d = Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) d.z() = -1.0;

  AlignmentResult result;
  result.transform.R = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  result.transform.scale = (svd.singularValues().dot(d)) / var_e;
  result.transform.t = mu_r - result.transform.scale * (result.transform.R * mu_e);

  double sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sq += (result.transform.apply(estimated[i]) - reference[i]).squaredNorm();
  }
  result.rmse = std::sqrt(sq / static_cast<double>(n));
  return result;
}

}  // namespace inar::synth
