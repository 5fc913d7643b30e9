#include "inar/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "inar/errors.hpp"

namespace inar::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vector3d any_orthogonal(const Vector3d& v) {
  const Vector3d axis = std::abs(v.x()) < 0.9 ? Vector3d(1, 0, 0) : Vector3d(0, 1, 0);
  return v.cross(axis).normalized();
}

// --------------------------------------------------------------------------
// Primitives
// --------------------------------------------------------------------------

class SphereSection final : public Primitive {
 public:
  Vector3d center;
  double radius = 1.0;
  Vector3d axis{0, 0, 1};
  double cos_half = -1.0;  // full sphere by default
  bool inward = false;     // vault interiors face the cameras

  bool intersect(const Vector3d& o, const Vector3d& d, double t_min, double* t,
                 Vector3d* normal) const override {
    const Vector3d oc = o - center;
    const double b = oc.dot(d);
    const double c = oc.squaredNorm() - radius * radius;
    const double disc = b * b - c;
    if (disc < 0) return false;
    const double sq = std::sqrt(disc);
    for (double root : {-b - sq, -b + sq}) {
      if (root <= t_min) continue;
      const Vector3d p = o + root * d;
      const Vector3d u = (p - center) / radius;
      if (u.dot(axis) < cos_half) continue;
      *t = root;
      *normal = inward ? -u : u;
      return true;
    }
    return false;
  }

  double area() const override { return 2.0 * kPi * radius * radius * (1.0 - cos_half); }

  void sample_surface(int count, std::uint64_t seed, std::vector<Vector3d>* points,
                      std::vector<Vector3d>* normals) const override {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vector3d e1 = any_orthogonal(axis);
    const Vector3d e2 = axis.cross(e1);
    for (int i = 0; i < count; ++i) {
      const double cz = cos_half + (1.0 - cos_half) * u01(rng);
      const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      const double phi = 2.0 * kPi * u01(rng);
      const Vector3d u = cz * axis + sz * (std::cos(phi) * e1 + std::sin(phi) * e2);
      points->push_back(center + radius * u);
      normals->push_back(inward ? -u : u);
    }
  }
};

class Disc final : public Primitive {
 public:
  Vector3d center;
  Vector3d normal_dir{0, 1, 0};
  double radius = 1.0;

  bool intersect(const Vector3d& o, const Vector3d& d, double t_min, double* t,
                 Vector3d* normal) const override {
    const double denom = d.dot(normal_dir);
    if (std::abs(denom) < 1e-12) return false;
    const double root = (center - o).dot(normal_dir) / denom;
    if (root <= t_min) return false;
    const Vector3d p = o + root * d;
    if ((p - center).squaredNorm() > radius * radius) return false;
    *t = root;
    *normal = denom < 0 ? normal_dir : Vector3d(-normal_dir);
    return true;
  }

  double area() const override { return kPi * radius * radius; }

  void sample_surface(int count, std::uint64_t seed, std::vector<Vector3d>* points,
                      std::vector<Vector3d>* normals) const override {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vector3d e1 = any_orthogonal(normal_dir);
    const Vector3d e2 = normal_dir.cross(e1);
    for (int i = 0; i < count; ++i) {
      const double r = radius * std::sqrt(u01(rng));
      const double phi = 2.0 * kPi * u01(rng);
      points->push_back(center + r * (std::cos(phi) * e1 + std::sin(phi) * e2));
      normals->push_back(normal_dir);
    }
  }
};

class Box final : public Primitive {
 public:
  Vector3d center;
  Matrix3d rot = Matrix3d::Identity();  // box-to-world
  Vector3d half{0.5, 0.5, 0.5};

  bool intersect(const Vector3d& o, const Vector3d& d, double t_min, double* t,
                 Vector3d* normal) const override {
    const Vector3d ob = rot.transpose() * (o - center);
    const Vector3d db = rot.transpose() * d;
    double t_near = -1e300, t_far = 1e300;
    int near_axis = -1;
    double near_sign = 1.0;
    for (int a = 0; a < 3; ++a) {
      if (std::abs(db[a]) < 1e-14) {
        if (std::abs(ob[a]) > half[a]) return false;
        continue;
      }
      double t0 = (-half[a] - ob[a]) / db[a];
      double t1 = (half[a] - ob[a]) / db[a];
      double sign = -1.0;
      if (t0 > t1) {
        std::swap(t0, t1);
        sign = 1.0;
      }
      if (t0 > t_near) {
        t_near = t0;
        near_axis = a;
        near_sign = sign;
      }
      t_far = std::min(t_far, t1);
      if (t_near > t_far) return false;
    }
    if (near_axis < 0 || t_near <= t_min) return false;  // origins inside the box see nothing
    *t = t_near;
    Vector3d nb = Vector3d::Zero();
    nb[near_axis] = near_sign;
    *normal = rot * nb;
    return true;
  }

  double area() const override {
    return 8.0 * (half.x() * half.y() + half.y() * half.z() + half.x() * half.z());
  }

  void sample_surface(int count, std::uint64_t seed, std::vector<Vector3d>* points,
                      std::vector<Vector3d>* normals) const override {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double areas[3] = {4 * half.y() * half.z(), 4 * half.x() * half.z(),
                             4 * half.x() * half.y()};
    const double total = areas[0] + areas[1] + areas[2];
    for (int i = 0; i < count; ++i) {
      double pick = u01(rng) * total;
      int axis = 0;
      while (axis < 2 && pick > areas[axis]) {
        pick -= areas[axis];
        ++axis;
      }
      const double sign = u01(rng) < 0.5 ? -1.0 : 1.0;
      Vector3d pb, nb = Vector3d::Zero();
      nb[axis] = sign;
      pb[axis] = sign * half[axis];
      const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      pb[a1] = (2.0 * u01(rng) - 1.0) * half[a1];
      pb[a2] = (2.0 * u01(rng) - 1.0) * half[a2];
      points->push_back(center + rot * pb);
      normals->push_back(rot * nb);
    }
  }
};

class CylinderSection final : public Primitive {
 public:
  Vector3d center;          // mid-point of the axis segment
  Vector3d axis{0, 1, 0};   // unit
  Vector3d outward{0, 0, -1};  // reference radial direction, unit, orthogonal to axis
  double radius = 1.0;
  double half_len = 1.0;
  double cos_max_angle = 0.0;  // half-cylinder: angular clamp around `outward`

  bool intersect(const Vector3d& o, const Vector3d& d, double t_min, double* t,
                 Vector3d* normal) const override {
    const Vector3d oc = o - center;
    const Vector3d op = oc - oc.dot(axis) * axis;
    const Vector3d dp = d - d.dot(axis) * axis;
    const double a = dp.squaredNorm();
    if (a < 1e-16) return false;
    const double b = op.dot(dp);
    const double c = op.squaredNorm() - radius * radius;
    const double disc = b * b - a * c;
    if (disc < 0) return false;
    const double sq = std::sqrt(disc);
    for (double root : {(-b - sq) / a, (-b + sq) / a}) {
      if (root <= t_min) continue;
      const Vector3d p = o + root * d;
      const Vector3d q = p - center;
      if (std::abs(q.dot(axis)) > half_len) continue;
      const Vector3d radial = (q - q.dot(axis) * axis) / radius;
      if (radial.dot(outward) < cos_max_angle) continue;
      *t = root;
      *normal = radial;
      return true;
    }
    return false;
  }

  double area() const override {
    const double angle = 2.0 * std::acos(std::clamp(cos_max_angle, -1.0, 1.0));
    return angle * radius * 2.0 * half_len;
  }

  void sample_surface(int count, std::uint64_t seed, std::vector<Vector3d>* points,
                      std::vector<Vector3d>* normals) const override {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double max_angle = std::acos(std::clamp(cos_max_angle, -1.0, 1.0));
    const Vector3d side = axis.cross(outward);
    for (int i = 0; i < count; ++i) {
      const double phi = (2.0 * u01(rng) - 1.0) * max_angle;
      const double h = (2.0 * u01(rng) - 1.0) * half_len;
      const Vector3d radial = std::cos(phi) * outward + std::sin(phi) * side;
      points->push_back(center + h * axis + radius * radial);
      normals->push_back(radial);
    }
  }
};

// --------------------------------------------------------------------------

std::uint64_t grid_key(int ix, int iy, int iz) {
  const auto wrap = [](int v) { return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF; };
  return (wrap(ix) << 42) | (wrap(iy) << 21) | wrap(iz);
}

Pose look_at_pose(const Vector3d& center, const Vector3d& target) {
  const Vector3d forward = (target - center).normalized();
  Vector3d right = forward.cross(Vector3d(0, 1, 0));
  if (right.norm() < 1e-9) right = forward.cross(Vector3d(1, 0, 0));
  right.normalize();
  const Vector3d down = forward.cross(right).normalized();
  Matrix3d r_wc;
  r_wc.row(0) = right.transpose();
  r_wc.row(1) = down.transpose();
  r_wc.row(2) = forward.transpose();
  return Pose{r_wc, -(r_wc * center)};
}

std::vector<Pose> rig_poses(const RigSpec& rig) {
  std::vector<Pose> poses;
  const double span = rig.span_deg * kPi / 180.0;
  for (int i = 0; i < rig.count; ++i) {
    const double a = rig.count == 1
                         ? 0.0
                         : -span / 2 + span * static_cast<double>(i) / (rig.count - 1);
    const Vector3d center = rig.look_at + Vector3d(rig.arc_radius * std::sin(a), rig.height,
                                                   -rig.arc_radius * std::cos(a));
    poses.push_back(look_at_pose(center, rig.look_at));
  }
  return poses;
}

}  // namespace

// --------------------------------------------------------------------------
// SceneSpec builtins and JSON round trip
// --------------------------------------------------------------------------

SceneSpec SceneSpec::museum_default() {
  SceneSpec spec;
  spec.name = "museum-default";
  spec.vault = VaultSpec{};
  spec.ground = GroundSpec{};
  spec.wall = WallSpec{};
  spec.objects = {
      ObjectSpec{ObjectSpec::Kind::kBox, true, Vector3d::Zero(), 0.95, 0.0, 0},
      ObjectSpec{ObjectSpec::Kind::kSphere, true, Vector3d::Zero(), 0.80, 0.0, 0},
      ObjectSpec{ObjectSpec::Kind::kBox, true, Vector3d::Zero(), 0.70, 0.0, 0},
      ObjectSpec{ObjectSpec::Kind::kSphere, true, Vector3d::Zero(), 0.62, 0.0, 0},
  };
  return spec;
}

SceneSpec SceneSpec::negative_control() {
  SceneSpec spec;
  spec.name = "negative-control";
  spec.vault.reset();
  spec.ground.kind = GroundSpec::Kind::kCorrugated;
  spec.ground.radius = 5.0;
  spec.ground.corrugation_radius = 0.7;
  spec.wall.kind = WallSpec::Kind::kCorrugated;
  spec.objects = {
      ObjectSpec{ObjectSpec::Kind::kBox, true, Vector3d::Zero(), 0.9, 0.0, 0},
      ObjectSpec{ObjectSpec::Kind::kSphere, true, Vector3d::Zero(), 0.75, 0.0, 0},
      ObjectSpec{ObjectSpec::Kind::kBox, true, Vector3d::Zero(), 0.65, 0.0, 0},
  };
  return spec;
}

namespace {

nlohmann::json vec3_json(const Vector3d& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Vector3d vec3_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw InvalidSpec(std::string(what) + " must be [x,y,z]");
  return Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

SceneSpec SceneSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("scene spec is not valid JSON: ") + e.what());
  }
  SceneSpec spec;
  spec.objects.clear();
  spec.name = j.value("name", std::string("custom"));
  if (j.contains("vault") && !j["vault"].is_null()) {
    VaultSpec v;
    const auto& jv = j["vault"];
    v.radius = jv.value("radius", v.radius);
    v.half_angle_deg = jv.value("half_angle_deg", v.half_angle_deg);
    v.cylindrical = jv.value("cylindrical", v.cylindrical);
    if (jv.contains("center") && jv["center"].is_array()) {
      v.center_auto = false;
      v.center = vec3_from(jv["center"], "vault.center");
    }
    spec.vault = v;
  } else {
    spec.vault.reset();
  }
  if (j.contains("ground")) {
    const auto& jg = j["ground"];
    const std::string kind = jg.value("kind", std::string("disc"));
    if (kind == "none") {
      spec.ground.kind = GroundSpec::Kind::kNone;
    } else if (kind == "disc") {
      spec.ground.kind = GroundSpec::Kind::kDisc;
    } else if (kind == "corrugated") {
      spec.ground.kind = GroundSpec::Kind::kCorrugated;
    } else {
      throw InvalidSpec("ground.kind must be none|disc|corrugated");
    }
    spec.ground.radius = jg.value("radius", spec.ground.radius);
    spec.ground.y = jg.value("y", spec.ground.y);
    spec.ground.corrugation_radius =
        jg.value("corrugation_radius", spec.ground.corrugation_radius);
  }
  if (j.contains("wall")) {
    const auto& jw = j["wall"];
    const std::string kind = jw.value("kind", std::string("none"));
    if (kind == "none") {
      spec.wall.kind = WallSpec::Kind::kNone;
    } else if (kind == "corrugated") {
      spec.wall.kind = WallSpec::Kind::kCorrugated;
    } else {
      throw InvalidSpec("wall.kind must be none|corrugated");
    }
    spec.wall.distance = jw.value("distance", spec.wall.distance);
    spec.wall.half_width = jw.value("half_width", spec.wall.half_width);
    spec.wall.y0 = jw.value("y0", spec.wall.y0);
    spec.wall.y1 = jw.value("y1", spec.wall.y1);
    spec.wall.corrugation_radius = jw.value("corrugation_radius", spec.wall.corrugation_radius);
  }
  if (j.contains("objects")) {
    for (const auto& jo : j["objects"]) {
      ObjectSpec o;
      const std::string kind = jo.value("kind", std::string("box"));
      if (kind == "box") {
        o.kind = ObjectSpec::Kind::kBox;
      } else if (kind == "sphere") {
        o.kind = ObjectSpec::Kind::kSphere;
      } else {
        throw InvalidSpec("object kind must be box|sphere");
      }
      o.size = jo.value("size", o.size);
      o.yaw_deg = jo.value("yaw_deg", 0.0);
      o.texture_seed = jo.value("texture_seed", 0);
      if (jo.contains("center") && jo["center"].is_array()) {
        o.placed_auto = false;
        o.center = vec3_from(jo["center"], "object.center");
      }
      spec.objects.push_back(o);
    }
  }
  if (j.contains("rig")) {
    const auto& jr = j["rig"];
    spec.rig.count = jr.value("count", spec.rig.count);
    spec.rig.arc_radius = jr.value("arc_radius", spec.rig.arc_radius);
    spec.rig.span_deg = jr.value("span_deg", spec.rig.span_deg);
    spec.rig.height = jr.value("height", spec.rig.height);
    if (jr.contains("look_at")) spec.rig.look_at = vec3_from(jr["look_at"], "rig.look_at");
  }
  if (j.contains("intrinsics")) {
    const auto& jk = j["intrinsics"];
    spec.intrinsics.fx = jk.value("fx", spec.intrinsics.fx);
    spec.intrinsics.fy = jk.value("fy", spec.intrinsics.fy);
    spec.intrinsics.cx = jk.value("cx", spec.intrinsics.cx);
    spec.intrinsics.cy = jk.value("cy", spec.intrinsics.cy);
    spec.intrinsics.width = jk.value("width", spec.intrinsics.width);
    spec.intrinsics.height = jk.value("height", spec.intrinsics.height);
  }
  spec.texture_density = j.value("texture_density", spec.texture_density);
  spec.dot_radius = j.value("dot_radius", spec.dot_radius);
  spec.min_views_keep = j.value("min_views_keep", spec.min_views_keep);
  return spec;
}

SceneSpec SceneSpec::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scene spec: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string SceneSpec::to_json_text() const {
  nlohmann::json j;
  j["name"] = name;
  if (vault) {
    j["vault"] = {{"radius", vault->radius},
                  {"half_angle_deg", vault->half_angle_deg},
                  {"cylindrical", vault->cylindrical}};
    if (!vault->center_auto) j["vault"]["center"] = vec3_json(vault->center);
  } else {
    j["vault"] = nullptr;
  }
  const char* ground_kind = ground.kind == GroundSpec::Kind::kNone
                                ? "none"
                                : ground.kind == GroundSpec::Kind::kDisc ? "disc" : "corrugated";
  j["ground"] = {{"kind", ground_kind},
                 {"radius", ground.radius},
                 {"y", ground.y},
                 {"corrugation_radius", ground.corrugation_radius}};
  j["wall"] = {{"kind", wall.kind == WallSpec::Kind::kNone ? "none" : "corrugated"},
               {"distance", wall.distance},
               {"half_width", wall.half_width},
               {"y0", wall.y0},
               {"y1", wall.y1},
               {"corrugation_radius", wall.corrugation_radius}};
  j["objects"] = nlohmann::json::array();
  for (const ObjectSpec& o : objects) {
    nlohmann::json jo = {{"kind", o.kind == ObjectSpec::Kind::kBox ? "box" : "sphere"},
                         {"size", o.size},
                         {"yaw_deg", o.yaw_deg},
                         {"texture_seed", o.texture_seed}};
    if (!o.placed_auto) jo["center"] = vec3_json(o.center);
    j["objects"].push_back(jo);
  }
  j["rig"] = {{"count", rig.count},
              {"arc_radius", rig.arc_radius},
              {"span_deg", rig.span_deg},
              {"height", rig.height},
              {"look_at", vec3_json(rig.look_at)}};
  j["intrinsics"] = {{"fx", intrinsics.fx}, {"fy", intrinsics.fy}, {"cx", intrinsics.cx},
                     {"cy", intrinsics.cy}, {"width", intrinsics.width},
                     {"height", intrinsics.height}};
  j["texture_density"] = texture_density;
  j["dot_radius"] = dot_radius;
  j["min_views_keep"] = min_views_keep;
  return j.dump(2) + "\n";
}

// --------------------------------------------------------------------------
// Scene assembly
// --------------------------------------------------------------------------

int Scene::raycast(const Vector3d& origin, const Vector3d& dir, double t_min, double* t,
                   Vector3d* normal) const {
  int hit = -1;
  double best_t = 1e300;
  Vector3d best_n;
  for (size_t i = 0; i < primitives.size(); ++i) {
    double ti;
    Vector3d ni;
    if (primitives[i]->intersect(origin, dir, t_min, &ti, &ni) && ti < best_t) {
      best_t = ti;
      best_n = ni;
      hit = static_cast<int>(i);
    }
  }
  if (hit >= 0) {
    *t = best_t;
    *normal = best_n;
  }
  return hit;
}

bool Scene::point_visible(const Vector3d& camera_center, const Vector3d& point,
                          const Vector3d& point_normal) const {
  const Vector3d to_cam = camera_center - point;
  const double dist = to_cam.norm();
  if (dist < 1e-12) return false;
  if (point_normal.dot(to_cam) <= 1e-9 * dist) return false;  // back-facing
  const Vector3d dir = -to_cam / dist;
  double t;
  Vector3d n;
  const int hit = raycast(camera_center, dir, 1e-9, &t, &n);
  if (hit < 0) return false;  // numeric grazing miss
  return t >= dist * (1.0 - 1e-9) - 1e-9;
}

double Scene::albedo(int primitive, const Vector3d& point) const {
  const Primitive& prim = *primitives[primitive];
  double value = prim.base_gray;
  const double cell = dot_grid.cell;
  const int ix = static_cast<int>(std::floor(point.x() / cell));
  const int iy = static_cast<int>(std::floor(point.y() / cell));
  const int iz = static_cast<int>(std::floor(point.z() / cell));
  const auto it = dot_grid.cells.find(grid_key(ix, iy, iz));
  if (it == dot_grid.cells.end()) return value;
  // Cell lists are sorted by id, so the accumulation order never depends on
  // the container layout.
  for (int id : it->second) {
    const TextureDot& dot = dots[id];
    if (dot.primitive != primitive) continue;
    const double d2 = (point - dot.position).squaredNorm();
    const double r2 = dot.radius * dot.radius;
    if (d2 >= r2) continue;
    const double s = 1.0 - d2 / r2;
    value += dot.contrast * s * s;
  }
  return value;
}

double Scene::distance_to_surfaces(const Vector3d& point, PointLabel* nearest_label) const {
  // Signed distance is not needed; the classification oracle wants the
  // unsigned distance to the nearest analytic surface and its label.
  double best = 1e300;
  PointLabel label = PointLabel::kAmbiguous;
  for (const auto& prim : primitives) {
    double d = 1e300;
    if (const auto* s = dynamic_cast<const SphereSection*>(prim.get())) {
      const Vector3d u = point - s->center;
      const double r = u.norm();
      if (r > 1e-12 && (u / r).dot(s->axis) >= s->cos_half) {
        d = std::abs(r - s->radius);
      } else {
        d = 1e300;  // outside the cap: skip rather than approximate the rim
      }
    } else if (const auto* disc = dynamic_cast<const Disc*>(prim.get())) {
      const Vector3d u = point - disc->center;
      const double h = u.dot(disc->normal_dir);
      const Vector3d in_plane = u - h * disc->normal_dir;
      const double rad = in_plane.norm();
      if (rad <= disc->radius) {
        d = std::abs(h);
      } else {
        d = std::sqrt((rad - disc->radius) * (rad - disc->radius) + h * h);
      }
    } else if (const auto* box = dynamic_cast<const Box*>(prim.get())) {
      const Vector3d pb = (box->rot.transpose() * (point - box->center)).cwiseAbs();
      const Vector3d q = pb - box->half;
      const double outside = q.cwiseMax(0.0).norm();
      const double inside = std::min(0.0, q.maxCoeff());
      d = std::abs(outside + inside);
    } else if (const auto* cyl = dynamic_cast<const CylinderSection*>(prim.get())) {
      const Vector3d q = point - cyl->center;
      const double ax = q.dot(cyl->axis);
      const Vector3d radial = q - ax * cyl->axis;
      const double rad = radial.norm();
      if (std::abs(ax) <= cyl->half_len && rad > 1e-12 &&
          (radial / rad).dot(cyl->outward) >= cyl->cos_max_angle) {
        d = std::abs(rad - cyl->radius);
      }
    }
    if (d < best) {
      best = d;
      label = prim->label;
    }
  }
  if (nearest_label) *nearest_label = label;
  return best;
}

namespace {

void add_dots_for_primitive(const Primitive& prim, const SceneSpec& spec, std::uint64_t seed,
                            std::uint64_t texture_seed, std::vector<TextureDot>* dots) {
  const int count = static_cast<int>(std::lround(prim.area() * spec.texture_density));
  if (count <= 0) return;
  std::vector<Vector3d> points, normals;
  const std::uint64_t prim_seed =
      seed * 0x9E3779B97F4A7C15ull + 0x1234ull * (prim.id + 1) + texture_seed;
  prim.sample_surface(count, prim_seed, &points, &normals);
  std::mt19937_64 rng(prim_seed ^ 0x55AAull);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    TextureDot dot;
    dot.position = points[i];
    dot.normal = normals[i];
    dot.radius = spec.dot_radius * prim.dot_radius_scale * (0.75 + 0.5 * u01(rng));
    const double magnitude = 55.0 + 45.0 * u01(rng);
    dot.contrast = (u01(rng) < 0.5 ? -1.0 : 1.0) * magnitude;
    dot.primitive = prim.id;
    dot.id = static_cast<int>(dots->size());
    dots->push_back(dot);
  }
}

}  // namespace

Scene build_scene(const SceneSpec& spec_in, std::uint64_t seed) {
  SceneSpec spec = spec_in;
  if (spec.rig.count < 2) throw InvalidSpec("camera rig needs at least 2 cameras");
  if (!spec.intrinsics.valid()) throw InvalidSpec("invalid intrinsics");
  if (spec.texture_density <= 0) throw InvalidSpec("texture_density must be positive");
  if (spec.dot_radius <= 0) throw InvalidSpec("dot_radius must be positive");
  if (spec.vault && spec.vault->radius <= 0) throw InvalidSpec("vault radius must be positive");

  Scene scene;
  scene.seed = seed;
  scene.rig_poses = rig_poses(spec.rig);

  // Resolve the vault center: the rig centroid makes the backdrop wrap the
  // capture viewpoint the way a hall backdrop wraps its visitors.
  if (spec.vault && spec.vault->center_auto) {
    Vector3d centroid = Vector3d::Zero();
    for (const Pose& p : scene.rig_poses) centroid += p.center();
    spec.vault->center = centroid / static_cast<double>(scene.rig_poses.size());
    spec.vault->center_auto = false;
  }

  std::mt19937_64 placement_rng(seed * 0x2545F4914F6CDD1Dull + 17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Auto-place objects on a ring around the look-at point.
  const double rest_gap = 0.05;
  std::vector<Vector3d> placed_centers;
  std::vector<double> placed_radii;
  for (size_t i = 0; i < spec.objects.size(); ++i) {
    ObjectSpec& obj = spec.objects[i];
    if (obj.size <= 0) throw InvalidSpec("object size must be positive");
    const double bound_radius =
        obj.kind == ObjectSpec::Kind::kBox ? obj.size * std::sqrt(3.0) / 2.0 : obj.size / 2.0;
    if (obj.placed_auto) {
      const double base_y = spec.ground.kind == GroundSpec::Kind::kNone
                                ? spec.rig.look_at.y() - obj.size / 2.0
                                : spec.ground.y;
      bool ok = false;
      for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        const double rho = 0.9 + 1.3 * u01(placement_rng);
        const double ang = 2.0 * kPi * u01(placement_rng);
        Vector3d c = spec.rig.look_at + Vector3d(rho * std::sin(ang), 0.0, rho * std::cos(ang));
        c.y() = base_y + rest_gap + obj.size / 2.0;
        ok = true;
        for (size_t j = 0; j < placed_centers.size(); ++j) {
          const double sep = (Vector3d(c.x(), 0, c.z()) -
                              Vector3d(placed_centers[j].x(), 0, placed_centers[j].z()))
                                 .norm();
          if (sep < bound_radius + placed_radii[j] + 0.15) {
            ok = false;
            break;
          }
        }
        if (ok) obj.center = c;
      }
      if (!ok) throw InvalidSpec("could not place objects without overlap");
      obj.placed_auto = false;
      if (obj.yaw_deg == 0.0 && obj.kind == ObjectSpec::Kind::kBox) {
        obj.yaw_deg = 360.0 * u01(placement_rng);
      }
    }
    if (spec.vault) {
      const double margin = (obj.center - spec.vault->center).norm() + bound_radius;
      if (margin >= spec.vault->radius - 0.1) {
        throw InvalidSpec("object outside the vault");
      }
    }
    placed_centers.push_back(obj.center);
    placed_radii.push_back(bound_radius);
  }

  // Assemble primitives: vault, ground, wall, objects, in that order.
  if (spec.vault) {
    auto vault = std::make_unique<SphereSection>();
    vault->center = spec.vault->center;
    vault->radius = spec.vault->radius;
    const Vector3d to_scene = spec.rig.look_at - spec.vault->center;
    vault->axis = to_scene.norm() > 1e-9 ? to_scene.normalized() : Vector3d(0, 0, 1);
    vault->cos_half = std::cos(spec.vault->half_angle_deg * kPi / 180.0);
    vault->inward = true;
    vault->label = PointLabel::kVirtualBackdrop;
    vault->base_gray = 150.0;
    vault->tint = Vector3d(0.85, 0.92, 1.0);
    vault->dot_radius_scale = 1.0;
    scene.primitives.push_back(std::move(vault));
  }
  if (spec.ground.kind == GroundSpec::Kind::kDisc) {
    auto ground = std::make_unique<Disc>();
    ground->center = Vector3d(spec.rig.look_at.x(), spec.ground.y, spec.rig.look_at.z());
    ground->normal_dir = Vector3d(0, 1, 0);
    ground->radius = spec.ground.radius;
    ground->label = PointLabel::kReal;
    ground->base_gray = 115.0;
    ground->tint = Vector3d(0.82, 1.0, 0.78);
    scene.primitives.push_back(std::move(ground));
  } else if (spec.ground.kind == GroundSpec::Kind::kCorrugated) {
    // Rolling terrain: half-cylinder rows bulging up from the base level.
    const double r = spec.ground.corrugation_radius;
    const double extent = spec.ground.radius;
    const int rows = static_cast<int>(std::floor(extent / r));
    for (int k = -rows; k <= rows; ++k) {
      auto row = std::make_unique<CylinderSection>();
      row->center = Vector3d(spec.rig.look_at.x(), spec.ground.y - 0.2 * r,
                             spec.rig.look_at.z() + 2.0 * r * k);
      row->axis = Vector3d(1, 0, 0);
      row->outward = Vector3d(0, 1, 0);
      row->radius = r;
      row->half_len = extent;
      row->cos_max_angle = 0.0;
      row->label = PointLabel::kReal;
      row->base_gray = 115.0;
      row->tint = Vector3d(0.9, 0.85, 0.7);
      scene.primitives.push_back(std::move(row));
    }
  }
  if (spec.wall.kind == WallSpec::Kind::kCorrugated) {
    const double r = spec.wall.corrugation_radius;
    const int cols = static_cast<int>(std::floor(spec.wall.half_width / r));
    for (int k = -cols; k <= cols; ++k) {
      auto col = std::make_unique<CylinderSection>();
      col->center = Vector3d(2.0 * r * k, 0.5 * (spec.wall.y0 + spec.wall.y1),
                             spec.wall.distance + r);
      col->axis = Vector3d(0, 1, 0);
      col->outward = Vector3d(0, 0, -1);
      col->radius = r;
      col->half_len = 0.5 * (spec.wall.y1 - spec.wall.y0);
      col->cos_max_angle = 0.0;
      col->label = PointLabel::kReal;
      col->base_gray = 150.0;
      col->tint = Vector3d(1.0, 0.92, 0.8);
      scene.primitives.push_back(std::move(col));
    }
  }
  for (const ObjectSpec& obj : spec.objects) {
    if (obj.kind == ObjectSpec::Kind::kBox) {
      auto box = std::make_unique<Box>();
      box->center = obj.center;
      const double a = obj.yaw_deg * kPi / 180.0;
      Matrix3d yaw;
      yaw << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
      box->rot = yaw;
      box->half = Vector3d::Constant(obj.size / 2.0);
      box->label = PointLabel::kReal;
      box->base_gray = 168.0;
      box->tint = Vector3d(1.0, 0.95, 0.85);
      box->dot_radius_scale = 0.5;
      scene.primitives.push_back(std::move(box));
    } else {
      auto sph = std::make_unique<SphereSection>();
      sph->center = obj.center;
      sph->radius = obj.size / 2.0;
      sph->axis = Vector3d(0, 1, 0);
      sph->cos_half = -1.0;
      sph->inward = false;
      sph->label = PointLabel::kReal;
      sph->base_gray = 140.0;
      sph->tint = Vector3d(0.95, 0.95, 0.95);
      sph->dot_radius_scale = 0.5;
      scene.primitives.push_back(std::move(sph));
    }
  }
  for (size_t i = 0; i < scene.primitives.size(); ++i) {
    scene.primitives[i]->id = static_cast<int>(i);
  }

  // Texture dots; each dot is also a labeled ground-truth feature.
  int obj_index = 0;
  for (const auto& prim : scene.primitives) {
    std::uint64_t texture_seed = 0;
    // Object primitives sit at the tail of the list, in spec order.
    const size_t first_obj = scene.primitives.size() - spec.objects.size();
    if (static_cast<size_t>(prim->id) >= first_obj) {
      texture_seed =
          static_cast<std::uint64_t>(spec.objects[prim->id - first_obj].texture_seed);
      ++obj_index;
    }
    add_dots_for_primitive(*prim, spec, seed, texture_seed, &scene.dots);
  }
  (void)obj_index;

  double max_dot_radius = 0.0;
  for (const TextureDot& dot : scene.dots) max_dot_radius = std::max(max_dot_radius, dot.radius);
  scene.dot_grid.cell = std::max(0.25, max_dot_radius + 1e-6);
  for (const TextureDot& dot : scene.dots) {
    const int ix = static_cast<int>(std::floor(dot.position.x() / scene.dot_grid.cell));
    const int iy = static_cast<int>(std::floor(dot.position.y() / scene.dot_grid.cell));
    const int iz = static_cast<int>(std::floor(dot.position.z() / scene.dot_grid.cell));
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          // Insert into all neighbor cells the dot's support can reach so the
          // shading lookup only has to inspect one cell ring.
          scene.dot_grid.cells[grid_key(ix + dx, iy + dy, iz + dz)].push_back(dot.id);
        }
      }
    }
  }
  for (auto& [key, ids] : scene.dot_grid.cells) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  scene.spec = spec;
  return scene;
}

}  // namespace inar::synth
