#pragma once

#include "anttamp/domain.hpp"

namespace anttamp {

struct CabinetScenarioParams {
  int per_class = 3;  // objects per class (mug, bottle, bowl)
  double robot_radius = 0.10;
  double object_radius = 0.06;
  double cabinet_width = 1.4;  // along the open front edge
  double cabinet_depth = 1.0;
  bool multi_class_tasks = false;
  bool interchangeable_obstruction = true;
  std::uint64_t layout_seed = 1;  // nominal in-cabinet arrangement
};

/// Open-front cabinet above a staging table, with a station in front of each.
/// All objects start stocked inside the cabinet.
Scenario make_cabinet_scenario(const CabinetScenarioParams& params = {});

/// Pick-and-place domain around an open-front cabinet. Objects are extracted
/// and inserted along straight lines through the front edge, so anything
/// sitting in that channel obstructs the grasp.
class CabinetDomain final : public Domain {
 public:
  explicit CabinetDomain(Scenario scenario);

  std::string_view name() const override { return "cabinet"; }
  TaskDistribution task_distribution() const override;
  Plan solve(const WorldState& state, const Task& task, Rng& rng,
             const SolverLimits& limits) const override;
  WorldState apply(const WorldState& state, const GroundAction& a) const override;
  double action_cost(const WorldState& state, const GroundAction& a) const override;
  WorldState random_state(Rng& rng) const override;
  GraphLayout graph_layout() const override;
  bool feature_interchangeable(EntityId a, EntityId b) const override;
  /// True when the cabinet can be emptied by straight-line extractions:
  /// repeatedly removing unobstructed objects clears it. Guards preparation
  /// against wedging objects behind one another.
  bool poses_feasible(const WorldState& s) const override;

  RegionId cabinet() const { return cabinet_; }
  RegionId table() const { return table_; }
  RegionId station_for(RegionId surface) const;
  Pose2 station_point(RegionId station) const;

  /// Nearest point on the cabinet's open edge to `p`: where a straight
  /// extraction of an object at `p` crosses the front.
  Pose2 front_point(const Pose2& p) const;

  /// Straight extraction channel front->object, half width sized for the
  /// object sliding out.
  geom::Corridor grasp_corridor(const Pose2& object_pose, double object_radius) const;

  /// Objects physically sitting in `obj`'s extraction channel, nearest the
  /// front first. Empty when obj is on the table (table grasps are open).
  std::vector<EntityId> grasp_obstructors(EntityId obj, const WorldState& s) const;

  static constexpr double kManipulationCost = 20.0;  // per pick and per place

 private:
  struct MoveGoal {
    EntityId object;
    RegionId destination;
  };

  Plan assemble(const WorldState& state, const Task& task, Rng& rng,
                const SolverLimits& limits) const;
  /// Emits move/pick/move/place for one object into `actions`, advancing `w`.
  /// Returns false when no destination pose can be sampled. `keep_clear`
  /// lists objects whose extraction channels the placement must stay out of.
  bool transfer(WorldState& w, std::vector<GroundAction>& actions, EntityId obj,
                RegionId dest, Rng& rng, const SolverLimits& limits,
                const std::vector<EntityId>* keep_clear = nullptr) const;
  /// Follows obstruction chains from `start` to an object that is itself
  /// unobstructed. Returns invalid id on a cycle (mutually wedged objects).
  EntityId find_clear_obstructor(EntityId start, const WorldState& w) const;
  std::optional<Pose2> sample_destination(const WorldState& w, EntityId obj,
                                          RegionId dest, Rng& rng, int max_tries,
                                          const std::vector<EntityId>* keep_clear
                                              = nullptr) const;

  RegionId cabinet_, table_, cabinet_station_, table_station_;
  geom::Segment front_;
};

}  // namespace anttamp
