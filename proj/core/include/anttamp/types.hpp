#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anttamp/ids.hpp"

namespace anttamp {

/// Two placed discs may interpenetrate by at most this much before the
/// configuration counts as invalid.
inline constexpr double kOverlapEpsilon = 1e-6;

struct Pose2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Pose2&, const Pose2&) = default;
};

inline double distance(const Pose2& a, const Pose2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class PredicateKind : std::uint8_t {
  In,       // In(entity, region): entity is placed in region
  Reached,  // Reached(entity): entity was the target of the last completed reach
  AtHome,   // AtHome(robot, region): robot is stationed at the given region
};

/// Ground boolean predicate over entities/regions. Evaluable against a
/// WorldState without scenario context.
struct Fluent {
  PredicateKind predicate;
  EntityId entity;
  RegionId region;  // unused for Reached

  friend bool operator==(const Fluent&, const Fluent&) = default;
  friend bool operator<(const Fluent& a, const Fluent& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    if (a.entity != b.entity) return a.entity < b.entity;
    return a.region < b.region;
  }

  static Fluent in(EntityId e, RegionId r) { return {PredicateKind::In, e, r}; }
  static Fluent reached(EntityId e) { return {PredicateKind::Reached, e, RegionId{}}; }
  static Fluent at_home(EntityId robot, RegionId home) { return {PredicateKind::AtHome, robot, home}; }
};

struct Gripper {
  std::optional<EntityId> held;

  bool empty() const { return !held.has_value(); }
  friend bool operator==(const Gripper&, const Gripper&) = default;
};

/// Discrete component of a world state. `placements` is indexed by entity id;
/// a held entity's slot is invalid until it is placed again. `reached` marks
/// the target of the most recent completed reach maneuver, which is what the
/// Reached fluent evaluates against.
struct SymbolicState {
  std::vector<RegionId> placements;
  Gripper gripper;
  std::optional<EntityId> reached;

  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;
};

/// Full state: symbolic placements plus continuous 2D poses, indexed by
/// entity id. The pose slot of a held entity is stale and must not be read.
struct WorldState {
  SymbolicState symbolic;
  std::vector<Pose2> poses;

  std::size_t entity_count() const { return poses.size(); }
  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct Task {
  std::vector<Fluent> goal;  // conjunction, kept sorted
  std::string label;

  friend bool operator==(const Task& a, const Task& b) { return a.goal == b.goal; }
};

struct TaskDistribution {
  struct Entry {
    Task task;
    double probability;
  };
  std::vector<Entry> entries;
};

enum class ActionKind : std::uint8_t { Move, Pick, Place, MoveClear };

/// Ground action. Field use by kind:
///   Move      region = destination station, poses = {station point}
///   Pick      entities = {object}
///   Place     entities = {object}, region = destination, poses = {place pose}
///   MoveClear entities = {target, blocker...}, poses = {standoff, new pose...}
struct GroundAction {
  ActionKind kind;
  std::vector<EntityId> entities;
  std::vector<Pose2> poses;
  RegionId region;
  double cost = 0.0;
};

struct Plan {
  std::vector<GroundAction> actions;
  WorldState initial;
  WorldState terminal;
  double total_cost = 0.0;

  bool empty() const { return actions.empty(); }
};

/// Raised when a plan's action cannot be applied; carries the failing index.
class PlanError : public std::runtime_error {
 public:
  PlanError(std::size_t action_index, const std::string& what)
      : std::runtime_error("action " + std::to_string(action_index) + ": " + what),
        action_index(action_index) {}
  std::size_t action_index;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True iff the fluent holds in `s`. Pure; throws ScenarioError on ids
/// outside the state's entity table.
bool evaluate_fluent(const Fluent& f, const WorldState& s);

/// Conjunction of evaluate_fluent over the task's goal set.
bool task_satisfied(const Task& t, const WorldState& s);

/// Exact sum of action costs; throws on a negative entry.
double plan_total_cost(const std::vector<GroundAction>& actions);

}  // namespace anttamp
