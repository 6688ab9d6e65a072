#include "anttamp/types.hpp"

namespace anttamp {

bool evaluate_fluent(const Fluent& f, const WorldState& s) {
  switch (f.predicate) {
    case PredicateKind::In:
    case PredicateKind::AtHome: {
      if (!f.entity.valid() || f.entity.value >= s.symbolic.placements.size()) {
        throw ScenarioError("fluent references unknown entity id " + std::to_string(f.entity.value));
      }
      if (!f.region.valid()) {
        throw ScenarioError("fluent references invalid region id");
      }
      return s.symbolic.placements[f.entity.value] == f.region;
    }
    case PredicateKind::Reached: {
      if (!f.entity.valid() || f.entity.value >= s.symbolic.placements.size()) {
        throw ScenarioError("fluent references unknown entity id " + std::to_string(f.entity.value));
      }
      return s.symbolic.reached.has_value() && *s.symbolic.reached == f.entity;
    }
  }
  throw ScenarioError("unknown predicate kind");
}

bool task_satisfied(const Task& t, const WorldState& s) {
  for (const Fluent& f : t.goal) {
    if (!evaluate_fluent(f, s)) return false;
  }
  return true;
}

double plan_total_cost(const std::vector<GroundAction>& actions) {
  double total = 0.0;
  for (const GroundAction& a : actions) {
    if (a.cost < 0.0) throw std::invalid_argument("negative action cost");
    total += a.cost;
  }
  return total;
}

}  // namespace anttamp
