#pragma once

#include <map>
#include <vector>

#include "inar/geom/camera.hpp"

namespace inar::feat {

using geom::Match;
using geom::Vector2d;

// All 2D observations of one scene point. At most one observation per image;
// tracks with conflicting chains never survive construction.
struct Track {
  int id = -1;
  std::map<int, Vector2d> observations;  // image index -> pixel
};

// Chains pairwise matches into multi-view tracks with a union-find over
// (image, keypoint) nodes. Components that collect two keypoints from the
// same image are discarded entirely; only components observed in at least
// two images survive. Track ids are assigned in order of each component's
// smallest (image, keypoint) member, which makes the result independent of
// the map iteration order of the input.
std::vector<Track> build_tracks(
    const std::map<std::pair<int, int>, std::vector<Match>>& pairwise_matches);

}  // namespace inar::feat
