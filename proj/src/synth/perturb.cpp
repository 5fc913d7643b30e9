#include "inar/synth/perturb.hpp"

#include <random>

#include "inar/errors.hpp"

namespace inar::synth {

std::vector<feat::Track> tracks_from_truth(const GroundTruth& truth) {
  std::vector<feat::Track> tracks;
  tracks.reserve(truth.points.size());
  for (const GroundTruthPoint& p : truth.points) {
    feat::Track t;
    t.id = p.id;
    t.observations = p.observations;
    tracks.push_back(std::move(t));
  }
  return tracks;
}

PerturbedTracks perturb(const std::vector<feat::Track>& tracks, const CameraIntrinsics& k,
                        double noise_sigma_px, double outlier_rate, std::uint64_t seed) {
  if (outlier_rate < 0.0 || outlier_rate >= 1.0) {
    throw ConfigError("outlier_rate must lie in [0, 1)");
  }
  if (noise_sigma_px < 0.0) throw ConfigError("noise sigma must be non-negative");

  PerturbedTracks out;
  out.tracks = tracks;
  out.corrupted.resize(tracks.size());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> ux(0.0, k.width - 1.0);
  std::uniform_real_distribution<double> uy(0.0, k.height - 1.0);

  for (size_t i = 0; i < out.tracks.size(); ++i) {
    for (auto& [image, pixel] : out.tracks[i].observations) {
      if (outlier_rate > 0.0 && u01(rng) < outlier_rate) {
        pixel = Vector2d(ux(rng), uy(rng));
        out.corrupted[i].push_back(image);
        continue;
      }
      if (noise_sigma_px > 0.0) {
        pixel.x() += noise_sigma_px * gauss(rng);
        pixel.y() += noise_sigma_px * gauss(rng);
      }
    }
  }
  return out;
}

}  // namespace inar::synth
