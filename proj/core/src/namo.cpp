#include "anttamp/namo.hpp"

#include <algorithm>
#include <cmath>

namespace anttamp {

namespace {

constexpr const char* kFloor = "floor";
constexpr const char* kHome = "home";

std::string block_name(int i) { return "block" + std::to_string(i); }

}  // namespace

Scenario make_namo_scenario(const NamoScenarioParams& params) {
  if (params.object_count < 1) throw ScenarioError("namo scenario needs at least one object");
  Scenario s;
  s.domain = DomainKind::Namo;
  s.workspace = {0.0, 0.0, params.workspace_side, params.workspace_side};
  s.class_names = {"block"};

  const Pose2 center = s.workspace.center();
  s.regions.push_back({kFloor, s.workspace, RegionKind::Surface, {}});
  s.regions.push_back(
      {kHome, {center.x, center.y, center.x, center.y}, RegionKind::Station, {}});
  const RegionId floor{0}, home{1};

  s.entities.push_back({"robot", kNoClass, params.robot_radius, home, center});

  Rng rng(derive_seed(params.layout_seed, "namo-layout", 0));
  std::vector<geom::Disc> occupied;
  occupied.push_back({kRobotId, center, params.robot_radius});
  for (int i = 0; i < params.object_count; ++i) {
    const auto pose =
        geom::sample_free_pose(s.workspace, occupied, params.object_radius, rng);
    if (!pose) throw ScenarioError("namo scenario is too crowded to place objects");
    const EntityId id{static_cast<std::uint32_t>(s.entities.size())};
    s.entities.push_back({block_name(i), 0, params.object_radius, floor, *pose});
    occupied.push_back({id, *pose, params.object_radius});
  }

  s.validate();
  return s;
}

NamoDomain::NamoDomain(Scenario scenario) : Domain(std::move(scenario)) {
  floor_region_ = this->scenario().region_by_name(kFloor);
  home_region_ = this->scenario().region_by_name(kHome);
  home_ = this->scenario().region(home_region_).rect.center();
}

Task NamoDomain::reach_task(EntityId target) const {
  Task t;
  t.goal = {Fluent::reached(target), Fluent::at_home(kRobotId, home_region_)};
  std::sort(t.goal.begin(), t.goal.end());
  t.label = "reach " + scenario().entities[target.value].name;
  return t;
}

TaskDistribution NamoDomain::task_distribution() const {
  TaskDistribution d;
  const auto n = scenario().movable_count();
  d.entries.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const EntityId e{static_cast<std::uint32_t>(i)};
    d.entries.push_back({reach_task(e), 1.0 / static_cast<double>(n)});
  }
  return d;
}

Pose2 NamoDomain::standoff(const Pose2& target_pose, double target_radius) const {
  const double reach =
      scenario().robot_radius() + target_radius + scenario().clearance;
  const double d = distance(home_, target_pose);
  if (d <= reach) return home_;
  const double t = reach / d;
  return {target_pose.x + (home_.x - target_pose.x) * t,
          target_pose.y + (home_.y - target_pose.y) * t};
}

geom::Corridor NamoDomain::reach_corridor(const Pose2& target_pose,
                                          double target_radius) const {
  return {{home_, standoff(target_pose, target_radius)},
          scenario().robot_radius() + scenario().clearance};
}

Plan NamoDomain::solve(const WorldState& state, const Task& task, Rng& rng,
                       const SolverLimits& limits) const {
  validate_state(state);
  if (task_satisfied(task, state)) {
    Plan p;
    p.initial = state;
    p.terminal = state;
    return p;
  }

  auto reached_it = std::find_if(task.goal.begin(), task.goal.end(), [](const Fluent& f) {
    return f.predicate == PredicateKind::Reached;
  });
  if (reached_it == task.goal.end())
    throw SolverError("namo task has no reach goal: " + task.label);
  const EntityId target = reached_it->entity;
  if (!target.valid() || target == kRobotId || target.value >= state.entity_count())
    throw SolverError("namo task names an invalid target: " + task.label);

  const double r_target = scenario().radius(target);
  const auto corridor = reach_corridor(state.poses[target.value], r_target);
  const EntityId ignore_target[] = {target};
  const auto discs = placed_discs(state);
  const auto in_the_way = geom::blockers(corridor, discs, ignore_target);
  const auto& floor = scenario().region(floor_region_).rect;
  const geom::Disc robot_disc{kRobotId, home_, scenario().robot_radius()};

  for (int attempt = 0; attempt < limits.skeleton_retries; ++attempt) {
    std::vector<Pose2> work = state.poses;
    std::vector<Pose2> new_poses;
    bool failed = false;

    for (std::size_t i = 0; i < in_the_way.size() && !failed; ++i) {
      const EntityId b = in_the_way[i];
      // Everything except the block being moved stands in the way.
      std::vector<geom::Disc> occupied;
      occupied.push_back(robot_disc);
      for (const auto& d : discs)
        if (d.id != b) occupied.push_back({d.id, work[d.id.value], d.radius});

      auto reject = [&](const Pose2& p) {
        const double r_b = scenario().radius(b);
        if (geom::blocks(corridor, p, r_b)) return true;
        // Keep the approach to every still-unmoved blocker open.
        for (std::size_t j = i + 1; j < in_the_way.size(); ++j) {
          const EntityId nb = in_the_way[j];
          const auto leg = reach_corridor(work[nb.value], scenario().radius(nb));
          if (geom::blocks(leg, p, r_b)) return true;
        }
        return false;
      };
      const auto pose = geom::sample_free_pose(floor, occupied, scenario().radius(b),
                                               rng, limits.refinement_max_tries, reject);
      if (!pose) {
        failed = true;
        break;
      }
      work[b.value] = *pose;
      new_poses.push_back(*pose);
    }
    if (failed) continue;

    GroundAction a;
    a.kind = ActionKind::MoveClear;
    a.entities.push_back(target);
    a.entities.insert(a.entities.end(), in_the_way.begin(), in_the_way.end());
    a.poses.push_back(standoff(state.poses[target.value], r_target));
    a.poses.insert(a.poses.end(), new_poses.begin(), new_poses.end());
    a.cost = action_cost(state, a);

    Plan p;
    p.initial = state;
    p.terminal = apply(state, a);
    p.actions = {std::move(a)};
    p.total_cost = p.actions[0].cost;
    return p;
  }
  throw SolverError("namo: no clear relocation layout found for " + task.label);
}

double NamoDomain::action_cost(const WorldState& state, const GroundAction& a) const {
  if (a.kind != ActionKind::MoveClear)
    throw PlanError(0, "namo supports only reach maneuvers");
  if (a.entities.empty() || a.poses.size() != a.entities.size())
    throw PlanError(0, "malformed reach maneuver");
  const Pose2& standoff_pose = a.poses[0];
  double cost = 2.0 * distance(home_, standoff_pose);
  for (std::size_t i = 1; i < a.entities.size(); ++i) {
    const EntityId b = a.entities[i];
    if (!b.valid() || b.value >= state.entity_count())
      throw PlanError(0, "reach maneuver lists an unknown block");
    const Pose2& from = state.poses[b.value];
    const Pose2& to = a.poses[i];
    cost += kRelocationCost + distance(home_, from) + distance(from, to) +
            distance(to, home_);
  }
  return cost;
}

WorldState NamoDomain::apply(const WorldState& state, const GroundAction& a) const {
  if (a.kind != ActionKind::MoveClear)
    throw PlanError(0, "namo supports only reach maneuvers");
  if (a.entities.empty() || a.poses.size() != a.entities.size())
    throw PlanError(0, "malformed reach maneuver");
  if (!state.symbolic.gripper.empty())
    throw PlanError(0, "reach maneuver requires an empty gripper");
  if (state.symbolic.placements[0] != home_region_ ||
      distance(state.poses[0], home_) > 1e-9)
    throw PlanError(0, "reach maneuver must start from home");

  const EntityId target = a.entities[0];
  if (!target.valid() || target == kRobotId || target.value >= state.entity_count())
    throw PlanError(0, "reach maneuver targets an invalid entity");

  const double r_target = scenario().radius(target);
  const auto corridor = reach_corridor(state.poses[target.value], r_target);
  if (distance(a.poses[0], corridor.spine.b) > 1e-9)
    throw PlanError(0, "stamped standoff does not match the target's pose");

  const EntityId ignore_target[] = {target};
  const auto expected = geom::blockers(corridor, placed_discs(state), ignore_target);
  if (expected.size() != a.entities.size() - 1 ||
      !std::equal(expected.begin(), expected.end(), a.entities.begin() + 1))
    throw PlanError(0, "listed blocks do not match the corridor's obstructions");

  WorldState out = state;
  const auto& floor = scenario().region(floor_region_).rect;
  for (std::size_t i = 1; i < a.entities.size(); ++i) {
    const EntityId b = a.entities[i];
    const Pose2& p = a.poses[i];
    const double r_b = scenario().radius(b);
    const auto legal = floor.inset(r_b);
    if (p.x < legal.xmin - 1e-9 || p.x > legal.xmax + 1e-9 ||
        p.y < legal.ymin - 1e-9 || p.y > legal.ymax + 1e-9)
      throw PlanError(0, "relocated block leaves the floor");
    out.poses[b.value] = p;
    for (std::size_t j = 0; j < out.poses.size(); ++j) {
      if (j == b.value) continue;
      if (geom::disc_separation(p, r_b, out.poses[j],
                                scenario().entities[j].radius) < -kOverlapEpsilon)
        throw PlanError(0, "relocated block lands on another entity");
    }
  }

  const auto still_blocked = geom::blockers(corridor, placed_discs(out), ignore_target);
  if (!still_blocked.empty())
    throw PlanError(0, "corridor is still obstructed after the relocations");

  out.symbolic.reached = target;
  validate_state(out);
  return out;
}

WorldState NamoDomain::random_state(Rng& rng) const {
  const auto& sc = scenario();
  const auto& floor = sc.region(floor_region_).rect;
  for (int attempt = 0; attempt < 16; ++attempt) {
    WorldState s = sc.initial_state();
    s.symbolic.reached.reset();
    std::vector<geom::Disc> occupied;
    occupied.push_back({kRobotId, home_, sc.robot_radius()});
    bool ok = true;
    for (std::size_t i = 1; i < sc.entity_count(); ++i) {
      const EntityId e{static_cast<std::uint32_t>(i)};
      const auto pose = geom::sample_free_pose(floor, occupied, sc.radius(e), rng);
      if (!pose) {
        ok = false;
        break;
      }
      s.poses[i] = *pose;
      occupied.push_back({e, *pose, sc.radius(e)});
    }
    if (ok) {
      validate_state(s);
      return s;
    }
  }
  throw SolverError("namo: floor too crowded to sample a state");
}

GraphLayout NamoDomain::graph_layout() const {
  GraphLayout layout;
  layout.kind_count = 2;
  layout.nodes.push_back({GraphLayout::Node::Kind::Robot, kRobotId, RegionId{}});
  for (std::size_t i = 1; i < scenario().entity_count(); ++i)
    layout.nodes.push_back({GraphLayout::Node::Kind::Object,
                            EntityId{static_cast<std::uint32_t>(i)}, RegionId{}});
  return layout;
}

}  // namespace anttamp
