#pragma once

#include <vector>

#include "anttamp/domain.hpp"

namespace anttamp {

/// Fully-connected feature graph over a world state. Node features are
/// [kind one-hot..., x, y, distance-to-robot]; edge features are
/// [distance, movable-obstacle count along the straight channel between the
/// endpoints]. Edges carry both orientations of every pair, listed pair by
/// pair, and the two orientations share features.
struct SceneGraph {
  struct Edge {
    int src = 0;
    int dst = 0;
  };

  int node_count = 0;
  int node_dim = 0;
  int edge_dim = 0;
  std::vector<double> node_features;  // node_count x node_dim, row-major
  std::vector<Edge> edges;
  std::vector<double> edge_features;  // edges.size() x edge_dim, row-major

  double node_feature(int node, int k) const {
    return node_features[static_cast<std::size_t>(node) * node_dim + k];
  }
  double edge_feature(std::size_t edge, int k) const {
    return edge_features[edge * edge_dim + k];
  }
};

SceneGraph encode_state(const Domain& domain, const WorldState& state);

}  // namespace anttamp
