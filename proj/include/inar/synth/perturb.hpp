#pragma once

#include <cstdint>

#include "inar/feat/tracks.hpp"
#include "inar/synth/render.hpp"

namespace inar::synth {

struct PerturbedTracks {
  std::vector<feat::Track> tracks;
  // corrupted[track index] -> image indices replaced by uniform outliers
  std::vector<std::vector<int>> corrupted;
};

// Converts ground truth into exact tracks (track id = ground-truth point id).
std::vector<feat::Track> tracks_from_truth(const GroundTruth& truth);

// Adds i.i.d. Gaussian pixel noise and replaces a Bernoulli(outlier_rate)
// subset of observations with uniform in-bounds pixels. Deterministic per
// seed: tracks are visited in id order, observations in image order.
PerturbedTracks perturb(const std::vector<feat::Track>& tracks, const CameraIntrinsics& k,
                        double noise_sigma_px, double outlier_rate, std::uint64_t seed);

}  // namespace inar::synth
