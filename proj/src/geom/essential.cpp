#include "inar/geom/essential.hpp"

#include <Eigen/SVD>
#include <random>

#include "inar/geom/triangulate.hpp"
#include "inar/parallel.hpp"

namespace inar::geom {

namespace {

struct HartleyFrame {
  Matrix3d T = Matrix3d::Identity();
};

// Centroid to origin, RMS distance sqrt(2).
HartleyFrame hartley_normalize(const std::vector<Vector2d>& pts) {
  Vector2d centroid = Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double rms = 0.0;
  for (const auto& p : pts) rms += (p - centroid).squaredNorm();
  rms = std::sqrt(rms / static_cast<double>(pts.size()));
  const double s = rms > 1e-15 ? std::sqrt(2.0) / rms : 1.0;
  HartleyFrame f;
  f.T << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return f;
}

}  // namespace

EssentialMatrix project_to_essential(const Matrix3d& m) {
  Eigen::JacobiSVD<Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = 0.5 * (svd.singularValues()(0) + svd.singularValues()(1));
  Matrix3d e = svd.matrixU() * Eigen::Vector3d(s, s, 0.0).asDiagonal() * svd.matrixV().transpose();
  const double norm = e.norm();
  if (norm > 1e-300) e *= std::sqrt(2.0) / norm;
  EssentialMatrix out;
  out.E = e;
  return out;
}

EssentialMatrix essential_8pt(const std::vector<Match>& matches, const CameraIntrinsics& ka,
                              const CameraIntrinsics& kb) {
  if (matches.size() < 8) {
    throw DegenerateConfiguration("eight-point solve needs >= 8 matches");
  }
  std::vector<Vector2d> xa(matches.size()), xb(matches.size());
  for (size_t i = 0; i < matches.size(); ++i) {
    xa[i] = ka.normalize(matches[i].pixel_a);
    xb[i] = kb.normalize(matches[i].pixel_b);
  }
  const HartleyFrame fa = hartley_normalize(xa);
  const HartleyFrame fb = hartley_normalize(xb);

  Eigen::MatrixXd a(matches.size(), 9);
  for (size_t i = 0; i < matches.size(); ++i) {
    const Vector3d pa = fa.T * Vector3d(xa[i].x(), xa[i].y(), 1.0);
    const Vector3d pb = fb.T * Vector3d(xb[i].x(), xb[i].y(), 1.0);
    a.row(i) << pb.x() * pa.x(), pb.x() * pa.y(), pb.x(), pb.y() * pa.x(), pb.y() * pa.y(),
        pb.y(), pa.x(), pa.y(), 1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // A unique (1-dimensional) null space needs the 8th singular value to be
  // healthy; pure rotation or coplanar-with-centers input collapses it.
  if (sv(7) < 1e-9 * sv(0)) {
    throw DegenerateConfiguration("rank-deficient eight-point design matrix");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Matrix3d en;
  en << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Matrix3d e = fb.T.transpose() * en * fa.T;
  return project_to_essential(e);
}

double sampson_distance(const EssentialMatrix& e, const Vector2d& xa_norm,
                        const Vector2d& xb_norm) {
  const Vector3d pa(xa_norm.x(), xa_norm.y(), 1.0);
  const Vector3d pb(xb_norm.x(), xb_norm.y(), 1.0);
  const Vector3d ea = e.E * pa;
  const Vector3d eb = e.E.transpose() * pb;
  const double c = pb.dot(ea);
  const double denom = ea.x() * ea.x() + ea.y() * ea.y() + eb.x() * eb.x() + eb.y() * eb.y();
  if (denom < 1e-300) return 0.0;
  return c * c / denom;
}

double sampson_distance(const EssentialMatrix& e, const Match& m, const CameraIntrinsics& ka,
                        const CameraIntrinsics& kb) {
  return sampson_distance(e, ka.normalize(m.pixel_a), kb.normalize(m.pixel_b));
}

Pose decompose_essential(const EssentialMatrix& e, const std::vector<Match>& matches,
                         const CameraIntrinsics& ka, const CameraIntrinsics& kb,
                         double abstain_angle_rad) {
  if (matches.empty()) throw CheiralityAmbiguous("no matches to disambiguate pose");

  Eigen::JacobiSVD<Matrix3d> svd(e.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d u = svd.matrixU();
  Matrix3d v = svd.matrixV();
  if (u.determinant() < 0) u.col(2) *= -1.0;
  if (v.determinant() < 0) v.col(2) *= -1.0;
  Matrix3d w;
  w << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  const Matrix3d r1 = u * w * v.transpose();
  const Matrix3d r2 = u * w.transpose() * v.transpose();
  const Vector3d tu = u.col(2);

  const Pose candidates[4] = {
      Pose{r1, tu}, Pose{r1, -tu}, Pose{r2, tu}, Pose{r2, -tu}};

  const CameraIntrinsics unit_k{1, 1, 0, 0, 2, 2};  // work in normalized coordinates
  int best = -1, best_votes = -1;
  for (int c = 0; c < 4; ++c) {
    int votes = 0;
    for (const Match& m : matches) {
      const Vector2d xa = ka.normalize(m.pixel_a);
      const Vector2d xb = kb.normalize(m.pixel_b);
      std::vector<Observation> obs{{unit_k, Pose{}, xa}, {unit_k, candidates[c], xb}};
      if (max_ray_angle(obs) < abstain_angle_rad) continue;  // could be at infinity
      TriangulationResult tri;
      int why = 0;
      if (!triangulate_dlt_checked(obs, 0.0, 0.0, &tri, &why)) continue;
      const bool front_a = tri.point.z() > 0.0;
      const bool front_b = candidates[c].apply(tri.point).z() > 0.0;
      if (front_a && front_b) ++votes;
    }
    if (votes > best_votes) {
      best_votes = votes;
      best = c;
    }
  }
  if (best_votes * 2 <= static_cast<int>(matches.size())) {
    throw CheiralityAmbiguous("no pose candidate wins a strict cheirality majority");
  }
  Pose pose = candidates[best];
  pose.t.normalize();
  return pose;
}

RansacResult ransac_essential(const std::vector<Match>& matches, const CameraIntrinsics& ka,
                              const CameraIntrinsics& kb, double threshold_px, int max_iters,
                              std::uint64_t seed, double confidence) {
  const int n = static_cast<int>(matches.size());
  if (n < 8) throw InsufficientInliers("RANSAC needs >= 8 matches");
  if (threshold_px <= 0) throw ConfigError("ransac threshold must be positive");

  std::vector<Vector2d> xa(n), xb(n);
  for (int i = 0; i < n; ++i) {
    xa[i] = ka.normalize(matches[i].pixel_a);
    xb[i] = kb.normalize(matches[i].pixel_b);
  }
  const double f_mean = 0.25 * (ka.fx + ka.fy + kb.fx + kb.fy);
  const double thresh_norm_sq = (threshold_px / f_mean) * (threshold_px / f_mean);

  struct IterScore {
    int count = -1;
    bool valid = false;
    EssentialMatrix e;
  };

  auto run_iteration = [&](int iter, IterScore* out) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(iter));
    std::uniform_int_distribution<int> dist(0, n - 1);
    int idx[8];
    int got = 0;
    while (got < 8) {
      const int candidate = dist(rng);
      bool dup = false;
      for (int k = 0; k < got; ++k) dup |= (idx[k] == candidate);
      if (!dup) idx[got++] = candidate;
    }
    std::vector<Match> sample(8);
    for (int k = 0; k < 8; ++k) sample[k] = matches[idx[k]];
    EssentialMatrix e;
    try {
      e = essential_8pt(sample, ka, kb);
    } catch (const DegenerateConfiguration&) {
      return;
    }
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (sampson_distance(e, xa[i], xb[i]) < thresh_norm_sq) ++count;
    }
    out->count = count;
    out->valid = true;
    out->e = e;
  };

  // Fixed-size blocks keep adaptive termination identical for every thread
  // count: candidates within a block run independently, the best-so-far and
  // the iteration budget update only at block boundaries.
  constexpr int kBlock = 32;
  IterScore best;
  int best_iter = -1;
  int iterations_needed = max_iters;
  int iter_base = 0;
  while (iter_base < iterations_needed) {
    const int block = std::min(kBlock, iterations_needed - iter_base);
    std::vector<IterScore> scores(block);
    parallel_for(block, [&](std::ptrdiff_t k) {
      run_iteration(iter_base + static_cast<int>(k), &scores[k]);
    });
    for (int k = 0; k < block; ++k) {
      if (scores[k].valid && scores[k].count > best.count) {
        best = scores[k];
        best_iter = iter_base + k;
      }
    }
    iter_base += block;
    if (best.valid && best.count >= 8) {
      const double w = static_cast<double>(best.count) / n;
      const double p_outlier_free = std::pow(w, 8);
      if (p_outlier_free >= 1.0 - 1e-12) {
        iterations_needed = iter_base;
      } else if (p_outlier_free > 1e-12) {
        const double need = std::log(1.0 - confidence) / std::log(1.0 - p_outlier_free);
        iterations_needed = std::min<int>(max_iters, static_cast<int>(std::ceil(need)));
        iterations_needed = std::max(iterations_needed, iter_base);
      }
    }
  }
  (void)best_iter;

  if (!best.valid || best.count < 8) {
    throw InsufficientInliers("best consensus set below eight matches");
  }

  std::vector<Match> consensus;
  consensus.reserve(best.count);
  for (int i = 0; i < n; ++i) {
    if (sampson_distance(best.e, xa[i], xb[i]) < thresh_norm_sq) consensus.push_back(matches[i]);
  }
  EssentialMatrix refined = best.e;
  try {
    refined = essential_8pt(consensus, ka, kb);
  } catch (const DegenerateConfiguration&) {
    // keep the minimal-sample estimate
  }

  RansacResult result;
  result.essential = refined;
  result.inlier_mask.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (sampson_distance(refined, xa[i], xb[i]) < thresh_norm_sq) {
      result.inlier_mask[i] = 1;
      ++result.inlier_count;
    }
  }
  if (result.inlier_count < 8) throw InsufficientInliers("refit consensus set below eight matches");
  result.iterations_run = iter_base;
  return result;
}

}  // namespace inar::geom
