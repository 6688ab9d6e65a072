#include "anttamp/scene_graph.hpp"

#include <array>
#include <cmath>

namespace anttamp {

namespace {

using Node = GraphLayout::Node;

Pose2 node_pose(const Scenario& sc, const WorldState& s, const Node& n) {
  if (n.kind == Node::Kind::Container) return sc.region(n.region).rect.center();
  // A held object rides with the robot.
  if (s.symbolic.gripper.held == n.entity) return s.poses[0];
  return s.poses[n.entity.value];
}

double node_radius(const Scenario& sc, const Node& n) {
  return n.kind == Node::Kind::Container ? 0.0 : sc.radius(n.entity);
}

// One-hot slot of each kind: kinds present in the layout, ranked in enum
// order, so a domain without containers still fills its full one-hot width.
std::array<int, 3> kind_slots(const GraphLayout& layout) {
  std::array<bool, 3> present{};
  for (const auto& node : layout.nodes) present[static_cast<int>(node.kind)] = true;
  std::array<int, 3> slot{-1, -1, -1};
  int next = 0;
  for (int k = 0; k < 3; ++k)
    if (present[k]) slot[k] = next++;
  return slot;
}

}  // namespace

SceneGraph encode_state(const Domain& domain, const WorldState& state) {
  const auto& sc = domain.scenario();
  const auto layout = domain.graph_layout();
  const int n = static_cast<int>(layout.nodes.size());

  SceneGraph g;
  g.node_count = n;
  g.node_dim = layout.kind_count + 3;
  g.edge_dim = 2;
  g.node_features.assign(static_cast<std::size_t>(n) * g.node_dim, 0.0);

  std::vector<Pose2> poses(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) poses[i] = node_pose(sc, state, layout.nodes[i]);

  const std::array<int, 3> slot = kind_slots(layout);
  for (int i = 0; i < n; ++i) {
    const auto& node = layout.nodes[i];
    double* f = &g.node_features[static_cast<std::size_t>(i) * g.node_dim];
    f[slot[static_cast<int>(node.kind)]] = 1.0;
    f[layout.kind_count + 0] = poses[i].x;
    f[layout.kind_count + 1] = poses[i].y;
    f[layout.kind_count + 2] = distance(poses[i], poses[0]);
  }

  // Movable discs once; obstacle counting reuses this list for every pair.
  const std::vector<geom::Disc> discs = [&] {
    std::vector<geom::Disc> out;
    for (std::size_t e = 1; e < state.poses.size(); ++e) {
      const EntityId id{static_cast<std::uint32_t>(e)};
      if (state.symbolic.gripper.held == id) continue;
      out.push_back({id, state.poses[e], sc.radius(id)});
    }
    return out;
  }();

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& a = layout.nodes[i];
      const auto& b = layout.nodes[j];
      const double dist = distance(poses[i], poses[j]);

      double obstacles = 0.0;
      if (a.kind != Node::Kind::Container && b.kind != Node::Kind::Container) {
        // Channel wide enough for the robot to pass between the two
        // endpoints, brushing the larger of them.
        const geom::Corridor corridor{
            {poses[i], poses[j]},
            sc.robot_radius() + std::max(node_radius(sc, a), node_radius(sc, b)) +
                sc.clearance};
        for (const auto& d : discs) {
          if (d.id == a.entity || d.id == b.entity) continue;
          if (domain.feature_interchangeable(d.id, a.entity) ||
              domain.feature_interchangeable(d.id, b.entity))
            continue;
          if (geom::blocks(corridor, d.center, d.radius)) obstacles += 1.0;
        }
      }

      g.edges.push_back({i, j});
      g.edge_features.push_back(dist);
      g.edge_features.push_back(obstacles);
      g.edges.push_back({j, i});
      g.edge_features.push_back(dist);
      g.edge_features.push_back(obstacles);
    }
  }
  return g;
}

}  // namespace anttamp
