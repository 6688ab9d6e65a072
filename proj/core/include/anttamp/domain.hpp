#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "anttamp/rng.hpp"
#include "anttamp/scenario.hpp"
#include "anttamp/types.hpp"

namespace anttamp {

/// Retry budgets for one solve call. The skeleton budget bounds whole-attempt
/// restarts (fresh orderings); the refinement budget bounds pose samples per
/// placement decision.
struct SolverLimits {
  int skeleton_retries = 16;
  int refinement_max_tries = 256;
};

/// How a domain's states map onto graphs for the cost estimator.
struct GraphLayout {
  struct Node {
    enum class Kind : std::uint8_t { Robot, Container, Object };
    Kind kind;
    EntityId entity;  // Robot/Object nodes
    RegionId region;  // Container nodes
  };
  std::vector<Node> nodes;  // robot first, then containers, then objects by id
  int kind_count = 2;       // one-hot width of the node kind feature
};

/// A task-and-motion-planning domain over a fixed scenario. Implementations
/// own all action semantics: the solver constructs plans exclusively through
/// solve(), and every consumer replays them exclusively through apply(), so
/// the two can never drift apart.
class Domain {
 public:
  explicit Domain(Scenario scenario) : scenario_(std::move(scenario)) {}
  virtual ~Domain() = default;

  Domain(const Domain&) = delete;
  Domain& operator=(const Domain&) = delete;

  const Scenario& scenario() const { return scenario_; }

  virtual std::string_view name() const = 0;

  /// The deployment's task distribution (fixed per scenario).
  virtual TaskDistribution task_distribution() const = 0;

  /// One feasible plan from `state` to a state satisfying `task`. Returns a
  /// plan whose actions replay exactly through apply(); terminal placements
  /// are randomized through `rng`. Throws SolverError when the budgets run
  /// out, PlanError never (solver-internal states are validated).
  virtual Plan solve(const WorldState& state, const Task& task, Rng& rng,
                     const SolverLimits& limits) const = 0;

  /// Apply one action with full precondition checks. Throws PlanError with
  /// index 0 on violation; callers wrap with the real plan index.
  virtual WorldState apply(const WorldState& state, const GroundAction& a) const = 0;

  /// Recompute the action's cost from its pre-state. The solver stamps
  /// GroundAction::cost with this value; replays verify against it.
  virtual double action_cost(const WorldState& state, const GroundAction& a) const = 0;

  /// A random valid world state (object placements resampled). Used for
  /// dataset generation and per-trial initial conditions.
  virtual WorldState random_state(Rng& rng) const = 0;

  virtual GraphLayout graph_layout() const = 0;

  /// Whether a collision-free state's poses leave every task solvable.
  /// Preparation rejects perturbations that fail this; domains with
  /// unrestricted placements keep the default.
  virtual bool poses_feasible(const WorldState&) const { return true; }

  /// True when swapping a and b yields an equivalent state for task purposes
  /// (e.g. same-class objects under interchangeable handling). Obstacle
  /// counting in graph features skips interchangeable obstacles.
  virtual bool feature_interchangeable(EntityId a, EntityId b) const = 0;

  /// Structural state invariants: consistent sizes, held-xor-placed
  /// entities, footprint membership, pairwise separation. Throws PlanError.
  void validate_state(const WorldState& s) const;

 protected:
  /// Discs of all placed movable entities except those listed in `ignore`.
  std::vector<geom::Disc> placed_discs(const WorldState& s,
                                       std::span<const EntityId> ignore = {}) const;

 private:
  Scenario scenario_;
};

/// Replay `actions` from `initial` through domain.apply, verifying each
/// stamped cost against action_cost. Returns the completed plan with
/// terminal state and total cost filled in.
Plan apply_plan(const Domain& domain, const WorldState& initial,
                const std::vector<GroundAction>& actions);

std::unique_ptr<Domain> make_domain(Scenario scenario);

}  // namespace anttamp
