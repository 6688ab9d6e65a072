#include "anttamp/domain.hpp"

#include <cmath>

#include "anttamp/cabinet.hpp"
#include "anttamp/namo.hpp"

namespace anttamp {

namespace {
bool contains_with_slack(const geom::Rect& r, const Pose2& p, double tol) {
  return p.x >= r.xmin - tol && p.x <= r.xmax + tol && p.y >= r.ymin - tol &&
         p.y <= r.ymax + tol;
}
}  // namespace

void Domain::validate_state(const WorldState& s) const {
  const auto& sc = scenario_;
  const std::size_t n = sc.entity_count();
  if (s.poses.size() != n || s.symbolic.placements.size() != n)
    throw PlanError(0, "state tables do not match the scenario entity count");

  const auto held = s.symbolic.gripper.held;
  if (held && (held->value == 0 || held->value >= n))
    throw PlanError(0, "gripper holds an invalid entity");

  for (std::size_t i = 0; i < n; ++i) {
    const EntityId e{static_cast<std::uint32_t>(i)};
    const bool is_held = held && *held == e;
    const bool is_placed = s.symbolic.placements[i].valid();
    if (is_held == is_placed)
      throw PlanError(0, "entity " + sc.entities[i].name +
                             " must be exactly one of placed or held");
    if (is_held) continue;
    const auto& pose = s.poses[i];
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y))
      throw PlanError(0, "entity " + sc.entities[i].name + " has a non-finite pose");
    if (s.symbolic.placements[i].value >= sc.regions.size())
      throw PlanError(0, "entity " + sc.entities[i].name + " placed in unknown region");
    const auto& reg = sc.region(s.symbolic.placements[i]);
    if (!contains_with_slack(reg.rect, pose, 1e-9))
      throw PlanError(0, "entity " + sc.entities[i].name +
                             " lies outside region " + reg.name);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (held && held->value == i) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (held && held->value == j) continue;
      const double sep = distance(s.poses[i], s.poses[j]) -
                         sc.entities[i].radius - sc.entities[j].radius;
      if (sep < -kOverlapEpsilon)
        throw PlanError(0, "entities " + sc.entities[i].name + " and " +
                               sc.entities[j].name + " overlap");
    }
  }
}

std::vector<geom::Disc> Domain::placed_discs(const WorldState& s,
                                             std::span<const EntityId> ignore) const {
  std::vector<geom::Disc> out;
  out.reserve(scenario_.movable_count());
  for (std::size_t i = 1; i < s.poses.size(); ++i) {
    const EntityId e{static_cast<std::uint32_t>(i)};
    if (s.symbolic.gripper.held == e) continue;
    if (geom::contains_id(ignore, e)) continue;
    out.push_back({e, s.poses[i], scenario_.radius(e)});
  }
  return out;
}

Plan apply_plan(const Domain& domain, const WorldState& initial,
                const std::vector<GroundAction>& actions) {
  Plan plan;
  plan.initial = initial;
  plan.actions = actions;
  WorldState cur = initial;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    try {
      const double expected = domain.action_cost(cur, actions[i]);
      if (std::abs(expected - actions[i].cost) > 1e-9)
        throw PlanError(0, "stamped cost " + std::to_string(actions[i].cost) +
                               " does not match recomputed cost " +
                               std::to_string(expected));
      cur = domain.apply(cur, actions[i]);
    } catch (const PlanError& e) {
      throw PlanError(i, e.what());
    }
  }
  plan.terminal = std::move(cur);
  plan.total_cost = plan_total_cost(plan.actions);
  return plan;
}

std::unique_ptr<Domain> make_domain(Scenario scenario) {
  scenario.validate();
  if (scenario.domain == DomainKind::Namo)
    return std::make_unique<NamoDomain>(std::move(scenario));
  return std::make_unique<CabinetDomain>(std::move(scenario));
}

}  // namespace anttamp
