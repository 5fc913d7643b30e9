#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace inar {

// Flat key-value run configuration. Every threshold or default named by the
// library lives here; unknown keys are rejected on parse and each value is
// range-checked. The hash covers the canonical serialization, so it changes
// iff some value changes.
struct RunConfig {
  // global
  std::int64_t seed = 1;
  std::int64_t threads = 0;  // 0 = library default

  // core geometry
  double ransac_threshold_px = 1.0;
  std::int64_t ransac_max_iters = 500;
  double ransac_confidence = 0.999;
  double baseline_epsilon = 1e-12;
  double min_ray_angle_rad = 1e-4;

  // features
  double harris_k = 0.04;
  double harris_response_floor = 1e5;
  std::int64_t harris_nms_radius = 4;
  std::int64_t harris_max_keypoints = 4000;
  std::int64_t descriptor_window = 11;
  double match_ratio_max = 0.8;

  // incremental sfm
  std::int64_t pair_min_shared_tracks = 50;
  std::int64_t pair_selection_max_matches = 600;
  double init_min_median_angle_deg = 2.0;
  double init_max_reproj_px = 4.0;
  std::int64_t resect_min_corrs = 12;
  double resect_threshold_px = 2.0;
  std::int64_t resect_max_iters = 500;
  double grow_min_angle_deg = 1.0;
  double cull_reproj_px = 4.0;
  std::int64_t ba_every_k = 1;
  std::int64_t ba_max_iterations = 60;
  double ba_initial_damping = 1e-6;
  double ba_damping_up = 10.0;
  double ba_damping_down = 0.25;
  double ba_gradient_tolerance = 1e-12;
  double ba_step_tolerance = 1e-14;
  double ba_huber_delta_px = 2.0;

  // densification
  double ncc_tau = 0.7;
  std::int64_t patch_min_views = 3;  // gamma
  std::int64_t patch_mu = 7;
  std::int64_t cell_beta_px = 4;
  double depth_conflict_fraction = 0.01;  // Delta, fraction of scene diameter
  double depth_search_fraction = 0.02;
  std::int64_t depth_search_steps = 9;
  double normal_cone_deg = 15.0;
  std::int64_t normal_dirs = 8;
  std::int64_t max_eval_views = 6;

  // classification
  std::int64_t normals_k = 12;
  std::int64_t segment_k = 10;
  double segment_angle_deg = 12.0;
  double segment_dist_fraction = 0.01;
  std::int64_t segment_min_size = 30;
  double solid_angle_bin_deg = 2.0;
  double tau_smooth = 0.01;
  double tau_env = 0.9;
  double tau_angle_sr = 1.0;
  std::int64_t min_probe_points = 20;
  double probe_min_angle_deg = 0.1;
  std::int64_t plane_ransac_iters = 200;
  double plane_threshold_fraction = 0.005;
  double quadric_preference = 0.5;
  std::int64_t envelope_cell_px = 8;

  // io
  double topview_pixels_per_unit = 20.0;

  // Parses a flat JSON object; unknown keys or out-of-range values raise
  // ConfigError. Missing keys keep their defaults.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  // Canonical serialization: keys sorted, one per line.
  std::string to_json_text() const;

  // FNV-1a over the canonical serialization, 16 hex digits.
  std::string hash() const;

  // All keys in canonical order (used by tests and the CLI docs).
  static std::vector<std::string> key_names();
};

}  // namespace inar
