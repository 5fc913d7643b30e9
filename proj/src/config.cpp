#include "inar/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "inar/errors.hpp"

namespace inar {

namespace {

struct Key {
  const char* name;
  enum Kind { kDouble, kInt } kind;
  size_t offset;
  double min;
  double max;
};

#define INAR_KEY_D(field, lo, hi) \
  Key { #field, Key::kDouble, offsetof(RunConfig, field), lo, hi }
#define INAR_KEY_I(field, lo, hi) \
  Key { #field, Key::kInt, offsetof(RunConfig, field), lo, hi }

const Key kKeys[] = {
    INAR_KEY_I(seed, 0, 9e18),
    INAR_KEY_I(threads, 0, 4096),
    INAR_KEY_D(ransac_threshold_px, 1e-6, 1e3),
    INAR_KEY_I(ransac_max_iters, 1, 1e7),
    INAR_KEY_D(ransac_confidence, 0.5, 1.0),
    INAR_KEY_D(baseline_epsilon, 0.0, 1.0),
    INAR_KEY_D(min_ray_angle_rad, 0.0, 1.0),
    INAR_KEY_D(harris_k, 0.0, 0.25),
    INAR_KEY_D(harris_response_floor, 0.0, 1e18),
    INAR_KEY_I(harris_nms_radius, 1, 256),
    INAR_KEY_I(harris_max_keypoints, 1, 1e7),
    INAR_KEY_I(descriptor_window, 3, 255),
    INAR_KEY_D(match_ratio_max, 1e-6, 0.999999),
    INAR_KEY_I(pair_min_shared_tracks, 8, 1e7),
    INAR_KEY_I(pair_selection_max_matches, 16, 1e7),
    INAR_KEY_D(init_min_median_angle_deg, 0.0, 90.0),
    INAR_KEY_D(init_max_reproj_px, 1e-6, 1e4),
    INAR_KEY_I(resect_min_corrs, 6, 1e7),
    INAR_KEY_D(resect_threshold_px, 1e-6, 1e4),
    INAR_KEY_I(resect_max_iters, 1, 1e7),
    INAR_KEY_D(grow_min_angle_deg, 0.0, 90.0),
    INAR_KEY_D(cull_reproj_px, 1e-6, 1e4),
    INAR_KEY_I(ba_every_k, 1, 1e6),
    INAR_KEY_I(ba_max_iterations, 1, 1e6),
    INAR_KEY_D(ba_initial_damping, 0.0, 1e12),
    INAR_KEY_D(ba_damping_up, 1.0 + 1e-9, 1e6),
    INAR_KEY_D(ba_damping_down, 1e-9, 1.0 - 1e-9),
    INAR_KEY_D(ba_gradient_tolerance, 0.0, 1.0),
    INAR_KEY_D(ba_step_tolerance, 0.0, 1.0),
    INAR_KEY_D(ba_huber_delta_px, 1e-6, 1e4),
    INAR_KEY_D(ncc_tau, -1.0, 1.0),
    INAR_KEY_I(patch_min_views, 2, 1024),
    INAR_KEY_I(patch_mu, 3, 255),
    INAR_KEY_I(cell_beta_px, 1, 1024),
    INAR_KEY_D(depth_conflict_fraction, 1e-9, 1.0),
    INAR_KEY_D(depth_search_fraction, 1e-9, 1.0),
    INAR_KEY_I(depth_search_steps, 3, 999),
    INAR_KEY_D(normal_cone_deg, 0.0, 89.0),
    INAR_KEY_I(normal_dirs, 1, 256),
    INAR_KEY_I(max_eval_views, 2, 1024),
    INAR_KEY_I(normals_k, 3, 4096),
    INAR_KEY_I(segment_k, 1, 4096),
    INAR_KEY_D(segment_angle_deg, 0.0, 180.0),
    INAR_KEY_D(segment_dist_fraction, 1e-9, 1.0),
    INAR_KEY_I(segment_min_size, 1, 1e9),
    INAR_KEY_D(solid_angle_bin_deg, 0.05, 45.0),
    INAR_KEY_D(tau_smooth, 1e-9, 1.0),
    INAR_KEY_D(tau_env, 0.0, 1.0),
    INAR_KEY_D(tau_angle_sr, 0.0, 12.6),
    INAR_KEY_I(min_probe_points, 1, 1e9),
    INAR_KEY_D(probe_min_angle_deg, 0.0, 90.0),
    INAR_KEY_I(plane_ransac_iters, 1, 1e7),
    INAR_KEY_D(plane_threshold_fraction, 1e-9, 1.0),
    INAR_KEY_D(quadric_preference, 1e-9, 1.0),
    INAR_KEY_I(envelope_cell_px, 1, 1024),
    INAR_KEY_D(topview_pixels_per_unit, 1e-3, 1e6),
};

#undef INAR_KEY_D
#undef INAR_KEY_I

double* double_slot(RunConfig& c, const Key& k) {
  return reinterpret_cast<double*>(reinterpret_cast<char*>(&c) + k.offset);
}
std::int64_t* int_slot(RunConfig& c, const Key& k) {
  return reinterpret_cast<std::int64_t*>(reinterpret_cast<char*>(&c) + k.offset);
}
const double* double_slot(const RunConfig& c, const Key& k) {
  return reinterpret_cast<const double*>(reinterpret_cast<const char*>(&c) + k.offset);
}
const std::int64_t* int_slot(const RunConfig& c, const Key& k) {
  return reinterpret_cast<const std::int64_t*>(reinterpret_cast<const char*>(&c) + k.offset);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const Key* key = nullptr;
    for (const Key& k : kKeys) {
      if (it.key() == k.name) {
        key = &k;
        break;
      }
    }
    if (!key) throw ConfigError("unknown config key: " + it.key());
    if (!it.value().is_number()) throw ConfigError("config key " + it.key() + " must be numeric");
    const double v = it.value().get<double>();
    if (!std::isfinite(v) || v < key->min || v > key->max) {
      throw ConfigError("config key " + it.key() + " out of range [" + format_double(key->min) +
                        ", " + format_double(key->max) + "]: " + format_double(v));
    }
    if (key->kind == Key::kDouble) {
      *double_slot(cfg, *key) = v;
    } else {
      if (v != std::floor(v)) throw ConfigError("config key " + it.key() + " must be an integer");
      *int_slot(cfg, *key) = static_cast<std::int64_t>(v);
    }
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  std::ostringstream out;
  out << "{\n";
  bool first = true;
  for (const Key& k : kKeys) {
    if (!first) out << ",\n";
    first = false;
    out << "  \"" << k.name << "\": ";
    if (k.kind == Key::kDouble) {
      out << format_double(*double_slot(*this, k));
    } else {
      out << *int_slot(*this, k);
    }
  }
  out << "\n}\n";
  return out.str();
}

std::string RunConfig::hash() const {
  const std::string canon = to_json_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::vector<std::string> RunConfig::key_names() {
  std::vector<std::string> names;
  for (const Key& k : kKeys) names.emplace_back(k.name);
  return names;
}

}  // namespace inar
