#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::synth {

using geom::CameraIntrinsics;
using geom::Pose;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

enum class PointLabel : int { kReal = 0, kVirtualBackdrop = 1, kAmbiguous = 2 };

// ---------------------------------------------------------------------------
// Scene description
// ---------------------------------------------------------------------------

struct VaultSpec {
  double radius = 10.0;
  double half_angle_deg = 80.0;  // cap half-angle around the axis
  bool center_auto = true;       // center on the camera-rig centroid
  Vector3d center = Vector3d::Zero();
  bool cylindrical = false;  // cylindrical vault variant
};

struct GroundSpec {
  enum class Kind { kNone, kDisc, kCorrugated } kind = Kind::kDisc;
  double radius = 4.0;
  double y = -1.0;
  double corrugation_radius = 0.7;  // kCorrugated: half-cylinder rows
};

struct WallSpec {
  enum class Kind { kNone, kCorrugated } kind = Kind::kNone;
  double distance = 5.5;  // z of the corrugation crest line
  double half_width = 5.6;
  double y0 = -1.0;
  double y1 = 6.0;
  double corrugation_radius = 0.8;
};

struct ObjectSpec {
  enum class Kind { kBox, kSphere } kind = Kind::kBox;
  bool placed_auto = true;  // position drawn from the scene seed
  Vector3d center = Vector3d::Zero();
  double size = 0.9;  // box edge length / sphere diameter
  double yaw_deg = 0.0;
  std::int64_t texture_seed = 0;  // 0 = derive from scene seed
};

struct RigSpec {
  int count = 20;
  double arc_radius = 3.0;
  double span_deg = 60.0;
  double height = 0.0;
  Vector3d look_at = Vector3d::Zero();
};

struct SceneSpec {
  std::string name = "museum-default";
  std::optional<VaultSpec> vault = VaultSpec{};
  GroundSpec ground;
  WallSpec wall;
  std::vector<ObjectSpec> objects;
  RigSpec rig;
  CameraIntrinsics intrinsics{525.0, 525.0, 320.0, 240.0, 640, 480};
  double texture_density = 10.0;  // dots per unit area
  double dot_radius = 0.13;
  int min_views_keep = 3;  // ground-truth points must be visible this often

  // The synthetic AR-museum stand-in: spherical backdrop, real floor disc,
  // four stones, 20-camera arc.
  static SceneSpec museum_default();
  // Open scene without any backdrop: corrugated rock wall and terrain, all
  // geometry real.
  static SceneSpec negative_control();

  static SceneSpec from_json_text(const std::string& text);
  static SceneSpec from_file(const std::string& path);
  std::string to_json_text() const;
};

// ---------------------------------------------------------------------------
// Built scene: analytic primitives plus labeled texture dots
// ---------------------------------------------------------------------------

struct TextureDot {
  Vector3d position;
  Vector3d normal;
  double radius = 0.1;
  double contrast = 0.0;  // signed gray offset at the bump peak
  int primitive = -1;
  int id = -1;
};

class Primitive {
 public:
  virtual ~Primitive() = default;
  // Nearest intersection with t > t_min; fills hit point normal (oriented
  // toward the shown side for vault interiors).
  virtual bool intersect(const Vector3d& origin, const Vector3d& dir, double t_min, double* t,
                         Vector3d* normal) const = 0;
  virtual double area() const = 0;
  virtual void sample_surface(int count, std::uint64_t seed, std::vector<Vector3d>* points,
                              std::vector<Vector3d>* normals) const = 0;

  PointLabel label = PointLabel::kReal;
  int id = -1;
  double base_gray = 150.0;
  Vector3d tint{1.0, 1.0, 1.0};
  double dot_radius_scale = 1.0;
};

struct Scene {
  SceneSpec spec;  // resolved: auto fields filled in
  std::uint64_t seed = 0;
  std::vector<std::unique_ptr<Primitive>> primitives;
  std::vector<TextureDot> dots;
  std::vector<Pose> rig_poses;  // world-to-camera, one per rig camera

  // Nearest surface hit over all primitives; returns primitive index or -1.
  int raycast(const Vector3d& origin, const Vector3d& dir, double t_min, double* t,
              Vector3d* normal) const;

  // True when the segment from the camera center to `point` is unobstructed
  // (up to a relative slack) and the surface faces the camera.
  bool point_visible(const Vector3d& camera_center, const Vector3d& point,
                     const Vector3d& point_normal) const;

  // Albedo (gray) and tint at a surface point of the given primitive,
  // including texture-dot bumps. Deterministic for any thread count.
  double albedo(int primitive, const Vector3d& point) const;

  // Signed distance to the analytically nearest scene surface, and the label
  // of that surface; the classification oracle.
  double distance_to_surfaces(const Vector3d& point, PointLabel* nearest_label) const;

  // Internal dot lookup acceleration, built once by build_scene. Dots are
  // registered in the full neighborhood their support can reach, so shading
  // inspects a single cell.
  struct DotGrid {
    double cell = 1.0;
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
  };
  DotGrid dot_grid;
};

// Samples labeled texture dots on every surface and assembles the analytic
// scene. Deterministic per (spec, seed). Throws InvalidSpec for malformed
// specs (objects outside the vault, rig with fewer than two cameras, ...).
Scene build_scene(const SceneSpec& spec, std::uint64_t seed);

}  // namespace inar::synth
