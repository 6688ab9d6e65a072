#pragma once

#include "anttamp/domain.hpp"

namespace anttamp {

struct NamoScenarioParams {
  int object_count = 10;
  double workspace_side = 4.0;
  double robot_radius = 0.12;
  double object_radius = 0.15;
  std::uint64_t layout_seed = 1;  // nominal (initial) object poses
};

/// Square floor with the robot parked at a central home station and
/// `object_count` movable discs scattered around it.
Scenario make_namo_scenario(const NamoScenarioParams& params = {});

/// Navigation-among-movable-obstacles domain. Tasks ask the robot to reach
/// one object and return home; the only action is a bundled reach maneuver
/// that relocates every obstacle out of the straight home->target corridor.
class NamoDomain final : public Domain {
 public:
  explicit NamoDomain(Scenario scenario);

  std::string_view name() const override { return "namo"; }
  TaskDistribution task_distribution() const override;
  Plan solve(const WorldState& state, const Task& task, Rng& rng,
             const SolverLimits& limits) const override;
  WorldState apply(const WorldState& state, const GroundAction& a) const override;
  double action_cost(const WorldState& state, const GroundAction& a) const override;
  WorldState random_state(Rng& rng) const override;
  GraphLayout graph_layout() const override;
  bool feature_interchangeable(EntityId, EntityId) const override { return false; }

  /// Goal of the reach task for `target`: Reached(target) & AtHome(robot).
  Task reach_task(EntityId target) const;

  Pose2 home() const { return home_; }
  RegionId home_region() const { return home_region_; }
  RegionId floor_region() const { return floor_region_; }

  /// Point on the home->target ray where the robot stops to touch the
  /// target: target retracted by (robot + target radius + clearance).
  /// Collapses to home when the target is already within reach.
  Pose2 standoff(const Pose2& target_pose, double target_radius) const;

  /// Straight approach corridor home->standoff(target), half width sized for
  /// the robot brushing past the target.
  geom::Corridor reach_corridor(const Pose2& target_pose, double target_radius) const;

  /// Cost per obstacle relocated during a reach maneuver, on top of the
  /// robot's travel distance.
  static constexpr double kRelocationCost = 200.0;

 private:
  RegionId floor_region_;
  RegionId home_region_;
  Pose2 home_;
};

}  // namespace anttamp
