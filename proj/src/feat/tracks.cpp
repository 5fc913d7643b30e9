#include "inar/feat/tracks.hpp"

#include <algorithm>

namespace inar::feat {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<Track> build_tracks(
    const std::map<std::pair<int, int>, std::vector<Match>>& pairwise_matches) {
  // Collect the node universe: (image, keypoint) with a representative pixel.
  std::map<std::pair<int, int>, int> node_index;
  std::vector<std::pair<int, int>> node_key;
  std::vector<Vector2d> node_pixel;
  auto intern = [&](int image, int keypoint, const Vector2d& pixel) {
    const auto key = std::make_pair(image, keypoint);
    auto it = node_index.find(key);
    if (it != node_index.end()) return it->second;
    const int idx = static_cast<int>(node_key.size());
    node_index.emplace(key, idx);
    node_key.push_back(key);
    node_pixel.push_back(pixel);
    return idx;
  };

  for (const auto& [pair, matches] : pairwise_matches) {
    for (const Match& m : matches) {
      intern(pair.first, m.index_a, m.pixel_a);
      intern(pair.second, m.index_b, m.pixel_b);
    }
  }

  UnionFind uf(node_key.size());
  for (const auto& [pair, matches] : pairwise_matches) {
    for (const Match& m : matches) {
      uf.unite(node_index.at({pair.first, m.index_a}), node_index.at({pair.second, m.index_b}));
    }
  }

  // Group nodes per component; roots are already the smallest member index,
  // and node indices follow (image, keypoint) order by construction.
  std::map<int, std::vector<int>> components;
  for (size_t i = 0; i < node_key.size(); ++i) {
    components[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
  }

  std::vector<Track> tracks;
  for (const auto& [root, members] : components) {
    bool conflict = false;
    std::map<int, Vector2d> obs;
    for (int node : members) {
      const auto& [image, keypoint] = node_key[node];
      if (obs.count(image)) {
        conflict = true;
        break;
      }
      obs[image] = node_pixel[node];
    }
    if (conflict || obs.size() < 2) continue;
    Track track;
    track.id = static_cast<int>(tracks.size());
    track.observations = std::move(obs);
    tracks.push_back(std::move(track));
  }
  return tracks;
}

}  // namespace inar::feat
