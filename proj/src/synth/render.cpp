#include "inar/synth/render.hpp"

#include <cmath>

#include "inar/parallel.hpp"

namespace inar::synth {

namespace {

const Vector3d kLightDir = Vector3d(0.35, 1.0, -0.25).normalized();

std::uint8_t quantize(double v) {
  int q = static_cast<int>(v + 0.5);
  if (q < 0) q = 0;
  if (q > 255) q = 255;
  return static_cast<std::uint8_t>(q);
}

}  // namespace

GroundTruth ground_truth_only(const Scene& scene) {
  GroundTruth truth;
  truth.intrinsics = scene.spec.intrinsics;
  truth.poses = scene.rig_poses;

  const int n_cams = static_cast<int>(scene.rig_poses.size());
  const int n_dots = static_cast<int>(scene.dots.size());

  // visibility[d * n_cams + c]: exact pixel (or NaN when hidden)
  std::vector<Vector2d> pixels(static_cast<size_t>(n_dots) * n_cams,
                               Vector2d(std::nan(""), std::nan("")));
  parallel_for(n_dots, [&](std::ptrdiff_t d) {
    const TextureDot& dot = scene.dots[d];
    for (int c = 0; c < n_cams; ++c) {
      const Pose& pose = scene.rig_poses[c];
      Vector2d pix;
      if (!geom::project_checked(truth.intrinsics, pose, dot.position, &pix)) continue;
      if (!truth.intrinsics.contains(pix)) continue;
      if (!scene.point_visible(pose.center(), dot.position, dot.normal)) continue;
      pixels[static_cast<size_t>(d) * n_cams + c] = pix;
    }
  });

  int next_id = 0;
  for (int d = 0; d < n_dots; ++d) {
    GroundTruthPoint point;
    point.position = scene.dots[d].position;
    point.label = scene.primitives[scene.dots[d].primitive]->label;
    point.primitive = scene.dots[d].primitive;
    for (int c = 0; c < n_cams; ++c) {
      const Vector2d& pix = pixels[static_cast<size_t>(d) * n_cams + c];
      if (!std::isnan(pix.x())) point.observations[c] = pix;
    }
    if (static_cast<int>(point.observations.size()) < scene.spec.min_views_keep) continue;
    point.id = next_id++;
    truth.points.push_back(std::move(point));
  }
  return truth;
}

RenderedViews render_views(const Scene& scene) {
  RenderedViews out;
  out.truth = ground_truth_only(scene);

  const CameraIntrinsics& k = scene.spec.intrinsics;
  const int n_cams = static_cast<int>(scene.rig_poses.size());
  out.color.resize(n_cams);
  out.gray.resize(n_cams);

  for (int c = 0; c < n_cams; ++c) {
    const Pose& pose = scene.rig_poses[c];
    const Pose cam_to_world = pose.inverse();
    const Vector3d origin = pose.center();
    ImageRGB& rgb = out.color[c];
    ImageGray& gray = out.gray[c];
    rgb = ImageRGB::constant(k.width, k.height, 16, 16, 20);
    gray = ImageGray::constant(k.width, k.height, 0.0f);

    parallel_for(k.height, [&](std::ptrdiff_t row) {
      for (int col = 0; col < k.width; ++col) {
        const Vector3d dir_cam((col - k.cx) / k.fx, (row - k.cy) / k.fy, 1.0);
        const Vector3d dir = (cam_to_world.R * dir_cam).normalized();
        double t;
        Vector3d normal;
        const int hit = scene.raycast(origin, dir, 1e-9, &t, &normal);
        double g = 6.0;
        Vector3d tint(1.0, 1.0, 1.0);
        if (hit >= 0) {
          const Vector3d p = origin + t * dir;
          const double albedo = scene.albedo(hit, p);
          const double shade = 0.55 + 0.45 * std::abs(normal.dot(kLightDir));
          g = albedo * shade;
          tint = scene.primitives[hit]->tint;
        }
        std::uint8_t* px = rgb.px(col, static_cast<int>(row));
        px[0] = quantize(g * tint.x());
        px[1] = quantize(g * tint.y());
        px[2] = quantize(g * tint.z());
        gray.at(col, static_cast<int>(row)) =
            static_cast<float>(rgb_to_gray(px[0], px[1], px[2]));
      }
    });
  }
  return out;
}

}  // namespace inar::synth
