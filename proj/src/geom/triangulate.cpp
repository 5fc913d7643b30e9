#include "inar/geom/triangulate.hpp"

#include <Eigen/SVD>

namespace inar::geom {

double max_ray_angle(const std::vector<Observation>& obs) {
  double max_angle = 0.0;
  std::vector<Vector3d> rays(obs.size());
  for (size_t i = 0; i < obs.size(); ++i) {
    rays[i] = obs[i].pose.ray(obs[i].K.normalize(obs[i].pixel));
  }
  for (size_t i = 0; i < rays.size(); ++i) {
    for (size_t j = i + 1; j < rays.size(); ++j) {
      const double c = std::clamp(rays[i].dot(rays[j]), -1.0, 1.0);
      max_angle = std::max(max_angle, std::acos(c));
    }
  }
  return max_angle;
}

bool triangulate_dlt_checked(const std::vector<Observation>& obs, double baseline_eps,
                             double min_angle_rad, TriangulationResult* out, int* why) {
  *why = 1;
  if (obs.size() < 2) return false;

  double max_baseline = 0.0;
  for (size_t i = 0; i < obs.size(); ++i) {
    for (size_t j = i + 1; j < obs.size(); ++j) {
      max_baseline =
          std::max(max_baseline, (obs[i].pose.center() - obs[j].pose.center()).norm());
    }
  }
  if (max_baseline <= baseline_eps) return false;
  if (max_ray_angle(obs) < min_angle_rad) return false;

  Eigen::MatrixXd a(2 * obs.size(), 4);
  for (size_t i = 0; i < obs.size(); ++i) {
    const Vector2d xn = obs[i].K.normalize(obs[i].pixel);
    Eigen::Matrix<double, 3, 4> p;
    p.leftCols<3>() = obs[i].pose.R;
    p.col(3) = obs[i].pose.t;
    a.row(2 * i) = xn.x() * p.row(2) - p.row(0);
    a.row(2 * i + 1) = xn.y() * p.row(2) - p.row(1);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  Eigen::Vector4d xh = svd.matrixV().col(3);
  if (std::abs(xh.w()) < 1e-14 * xh.head<3>().norm()) return false;
  const Vector3d x = xh.head<3>() / xh.w();

  size_t in_front = 0;
  for (const Observation& o : obs) {
    if (o.pose.apply(x).z() > 0.0) ++in_front;
  }
  if (2 * in_front <= obs.size()) {
    *why = 2;
    return false;
  }

  double err = 0.0;
  for (const Observation& o : obs) {
    Vector2d pix;
    if (project_checked(o.K, o.pose, x, &pix)) {
      err += (pix - o.pixel).norm();
    } else {
      err += o.K.width + o.K.height;  // behind-camera view: count as gross error
    }
  }
  out->point = x;
  out->mean_reprojection_px = err / static_cast<double>(obs.size());
  *why = 0;
  return true;
}

TriangulationResult triangulate_dlt(const std::vector<Observation>& obs, double baseline_eps,
                                    double min_angle_rad) {
  TriangulationResult result;
  int why = 0;
  if (triangulate_dlt_checked(obs, baseline_eps, min_angle_rad, &result, &why)) return result;
  if (why == 2) throw BehindCameraMajority("triangulated point behind camera in half the views");
  throw DegenerateTriangulation("zero baseline or near-parallel rays");
}

}  // namespace inar::geom
