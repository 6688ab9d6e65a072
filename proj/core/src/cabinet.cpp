#include "anttamp/cabinet.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace anttamp {

namespace {

geom::Segment front_segment(const geom::Rect& r, FrontEdge f) {
  switch (f) {
    case FrontEdge::South: return {{r.xmin, r.ymin}, {r.xmax, r.ymin}};
    case FrontEdge::North: return {{r.xmin, r.ymax}, {r.xmax, r.ymax}};
    case FrontEdge::West: return {{r.xmin, r.ymin}, {r.xmin, r.ymax}};
    case FrontEdge::East: return {{r.xmax, r.ymin}, {r.xmax, r.ymax}};
  }
  return {};
}

Pose2 nearest_on(const geom::Segment& s, const Pose2& p) {
  const double t = geom::segment_projection(p, s);
  return {s.a.x + (s.b.x - s.a.x) * t, s.a.y + (s.b.y - s.a.y) * t};
}

}  // namespace

Scenario make_cabinet_scenario(const CabinetScenarioParams& params) {
  if (params.per_class < 1) throw ScenarioError("cabinet scenario needs objects");
  Scenario s;
  s.domain = DomainKind::Cabinet;
  s.workspace = {0.0, 0.0, 3.0, 3.0};
  s.class_names = {"mug", "bottle", "bowl"};
  s.multi_class_tasks = params.multi_class_tasks;
  s.interchangeable_obstruction = params.interchangeable_obstruction;

  const geom::Rect cabinet_rect{1.5 - params.cabinet_width / 2, 1.5,
                                1.5 + params.cabinet_width / 2,
                                1.5 + params.cabinet_depth};
  const geom::Rect table_rect{0.8, 0.2, 2.2, 0.8};
  s.regions.push_back({"cabinet", cabinet_rect, RegionKind::Surface, FrontEdge::South});
  s.regions.push_back({"table", table_rect, RegionKind::Surface, {}});
  s.regions.push_back({"cabinet_station", {1.5, 1.3, 1.5, 1.3}, RegionKind::Station, {}});
  s.regions.push_back({"table_station", {1.5, 0.95, 1.5, 0.95}, RegionKind::Station, {}});
  const RegionId cabinet{0}, table_station{3};

  s.entities.push_back({"robot", kNoClass, params.robot_radius, table_station, {1.5, 0.95}});

  // Stock the cabinet item by item, each with a clear insertion channel, the
  // way a person would fill it through the front.
  Rng rng(derive_seed(params.layout_seed, "cabinet-layout", 0));
  const auto front = front_segment(cabinet_rect, FrontEdge::South);
  std::vector<geom::Disc> occupied;
  occupied.push_back({kRobotId, {1.5, 0.95}, params.robot_radius});
  for (std::uint8_t c = 0; c < 3; ++c) {
    for (int i = 0; i < params.per_class; ++i) {
      auto reject = [&](const Pose2& p) {
        const geom::Corridor corridor{{nearest_on(front, p), p},
                                      params.object_radius + s.clearance};
        return !geom::blockers(corridor, occupied, {}).empty();
      };
      const auto pose = geom::sample_free_pose(cabinet_rect, occupied,
                                               params.object_radius, rng,
                                               geom::kDefaultMaxTries, reject);
      if (!pose) throw ScenarioError("cabinet is too crowded to stock");
      const EntityId id{static_cast<std::uint32_t>(s.entities.size())};
      s.entities.push_back({s.class_names[c] + std::to_string(i), c,
                            params.object_radius, cabinet, *pose});
      occupied.push_back({id, *pose, params.object_radius});
    }
  }

  s.validate();
  return s;
}

CabinetDomain::CabinetDomain(Scenario scenario) : Domain(std::move(scenario)) {
  const auto& sc = this->scenario();
  cabinet_ = sc.region_by_name("cabinet");
  table_ = sc.region_by_name("table");
  cabinet_station_ = sc.region_by_name("cabinet_station");
  table_station_ = sc.region_by_name("table_station");
  front_ = front_segment(sc.region(cabinet_).rect, *sc.region(cabinet_).front);
}

RegionId CabinetDomain::station_for(RegionId surface) const {
  if (surface == cabinet_) return cabinet_station_;
  if (surface == table_) return table_station_;
  throw PlanError(0, "no station serves region " + scenario().region(surface).name);
}

Pose2 CabinetDomain::station_point(RegionId station) const {
  return scenario().region(station).rect.center();
}

Pose2 CabinetDomain::front_point(const Pose2& p) const { return nearest_on(front_, p); }

geom::Corridor CabinetDomain::grasp_corridor(const Pose2& object_pose,
                                             double object_radius) const {
  return {{front_point(object_pose), object_pose},
          object_radius + scenario().clearance};
}

std::vector<EntityId> CabinetDomain::grasp_obstructors(EntityId obj,
                                                       const WorldState& s) const {
  if (s.symbolic.placements[obj.value] != cabinet_) return {};
  const auto corridor = grasp_corridor(s.poses[obj.value], scenario().radius(obj));
  const EntityId ignore[] = {obj};
  return geom::blockers(corridor, placed_discs(s), ignore);
}

bool CabinetDomain::feature_interchangeable(EntityId a, EntityId b) const {
  if (!scenario().interchangeable_obstruction) return false;
  if (!a.valid() || !b.valid() || a == kRobotId || b == kRobotId) return false;
  const auto ca = scenario().class_of(a), cb = scenario().class_of(b);
  return ca != kNoClass && ca == cb;
}

TaskDistribution CabinetDomain::task_distribution() const {
  const auto& sc = scenario();
  const int k = static_cast<int>(sc.class_names.size());
  std::vector<std::vector<std::uint8_t>> groups;
  if (sc.multi_class_tasks) {
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<std::uint8_t> g;
      for (int c = 0; c < k; ++c)
        if (mask & (1 << c)) g.push_back(static_cast<std::uint8_t>(c));
      groups.push_back(std::move(g));
    }
  } else {
    for (int c = 0; c < k; ++c) groups.push_back({static_cast<std::uint8_t>(c)});
  }

  TaskDistribution d;
  for (const bool load : {true, false}) {
    const RegionId dest = load ? cabinet_ : table_;
    for (const auto& g : groups) {
      Task t;
      std::string names;
      for (const auto c : g) {
        if (!names.empty()) names += '+';
        names += sc.class_names[c];
        for (std::size_t i = 1; i < sc.entity_count(); ++i)
          if (sc.class_of(EntityId{static_cast<std::uint32_t>(i)}) == c)
            t.goal.push_back(Fluent::in(EntityId{static_cast<std::uint32_t>(i)}, dest));
      }
      std::sort(t.goal.begin(), t.goal.end());
      t.label = (load ? "load " : "unload ") + names;
      d.entries.push_back({std::move(t), 0.0});
    }
  }
  for (auto& e : d.entries) e.probability = 1.0 / static_cast<double>(d.entries.size());
  return d;
}

EntityId CabinetDomain::find_clear_obstructor(EntityId start, const WorldState& w) const {
  std::unordered_set<std::uint32_t> visited;
  EntityId cur = start;
  while (visited.insert(cur.value).second) {
    const auto obs = grasp_obstructors(cur, w);
    if (obs.empty()) return cur;
    cur = obs[0];
  }
  return {};  // wedged: obstruction chain loops back on itself
}

std::optional<Pose2> CabinetDomain::sample_destination(const WorldState& w, EntityId obj,
                                                       RegionId dest, Rng& rng,
                                                       int max_tries,
                                                       const std::vector<EntityId>*
                                                           keep_clear) const {
  const auto& rect = scenario().region(dest).rect;
  const double r = scenario().radius(obj);
  auto occupied = placed_discs(w);
  occupied.push_back({kRobotId, w.poses[0], scenario().robot_radius()});

  // Channels the new pose must not sit in: those of the listed objects.
  std::vector<geom::Corridor> protect;
  if (keep_clear != nullptr)
    for (const EntityId e : *keep_clear)
      if (e != obj && w.symbolic.placements[e.value] == cabinet_)
        protect.push_back(grasp_corridor(w.poses[e.value], scenario().radius(e)));

  std::function<bool(const Pose2&)> reject;
  if (dest == cabinet_ || !protect.empty()) {
    reject = [this, obj, r, dest, &occupied, &protect](const Pose2& p) {
      if (dest == cabinet_ &&
          !geom::blockers(grasp_corridor(p, r), occupied, {}).empty())
        return true;
      const std::vector<geom::Disc> placed{{obj, p, r}};
      for (const auto& channel : protect)
        if (!geom::blockers(channel, placed, {}).empty()) return true;
      return false;
    };
  }
  if (dest != cabinet_)
    return geom::sample_free_pose(rect, occupied, r, rng, max_tries, reject);
  // Stocking pushes toward the back wall: keep the deepest of several feasible
  // draws so columns fill back to front and the front band stays open.
  std::optional<Pose2> best;
  int budget = max_tries;
  const int slice = std::max(1, (max_tries + 5) / 6);
  while (budget > 0) {
    const int tries = std::min(budget, slice);
    budget -= tries;
    if (const auto p = geom::sample_free_pose(rect, occupied, r, rng, tries, reject))
      if (!best || p->y > best->y) best = *p;
  }
  return best;
}

bool CabinetDomain::transfer(WorldState& w, std::vector<GroundAction>& actions,
                             EntityId obj, RegionId dest, Rng& rng,
                             const SolverLimits& limits,
                             const std::vector<EntityId>* keep_clear) const {
  const RegionId src = w.symbolic.placements[obj.value];
  const RegionId src_station = station_for(src);
  const RegionId dst_station = station_for(dest);
  const WorldState checkpoint = w;
  const std::size_t mark = actions.size();

  auto emit = [&](GroundAction a) {
    a.cost = action_cost(w, a);
    w = apply(w, a);
    actions.push_back(std::move(a));
  };

  if (w.symbolic.placements[0] != src_station) {
    GroundAction m;
    m.kind = ActionKind::Move;
    m.region = src_station;
    m.poses = {station_point(src_station)};
    emit(std::move(m));
  }
  GroundAction pick;
  pick.kind = ActionKind::Pick;
  pick.entities = {obj};
  emit(std::move(pick));

  if (w.symbolic.placements[0] != dst_station) {
    GroundAction m;
    m.kind = ActionKind::Move;
    m.region = dst_station;
    m.poses = {station_point(dst_station)};
    emit(std::move(m));
  }
  const auto pose =
      sample_destination(w, obj, dest, rng, limits.refinement_max_tries, keep_clear);
  if (!pose) {  // nothing fits: undo the approach so the caller can re-plan
    w = checkpoint;
    actions.resize(mark);
    return false;
  }
  GroundAction place;
  place.kind = ActionKind::Place;
  place.entities = {obj};
  place.region = dest;
  place.poses = {*pose};
  emit(std::move(place));
  return true;
}

Plan CabinetDomain::assemble(const WorldState& state, const Task& task, Rng& rng,
                             const SolverLimits& limits) const {
  struct Goal {
    EntityId object;
    RegionId dest;
  };
  std::vector<Goal> order;
  for (const auto& f : task.goal) {
    if (f.predicate != PredicateKind::In)
      throw SolverError("cabinet task has a non-placement goal: " + task.label);
    if (!f.entity.valid() || f.entity == kRobotId ||
        f.entity.value >= state.entity_count())
      throw SolverError("cabinet task names an invalid object: " + task.label);
    order.push_back({f.entity, f.region});
  }
  rng.shuffle(order);

  const bool interchange = scenario().interchangeable_obstruction;
  WorldState w = state;
  std::vector<GroundAction> actions;
  const std::size_t guard = 8 * state.entity_count() + order.size();

  for (std::size_t iter = 0;; ++iter) {
    if (iter > guard) throw SolverError("cabinet: transfer loop did not converge");
    std::vector<Goal> remaining;
    for (const auto& g : order)
      if (w.symbolic.placements[g.object.value] != g.dest) remaining.push_back(g);
    if (remaining.empty()) break;

    // A blocker is re-shelved out of every remaining goal channel — and out of
    // the channels of everything wedged into those chains, so each clear makes
    // strict progress — staying in the cabinet; it goes down to the table only
    // when no such spot is left.
    auto clear_blocker = [&](const EntityId c) {
      std::vector<EntityId> keep_clear;
      std::unordered_set<std::uint32_t> seen;
      for (const auto& r : remaining)
        if (seen.insert(r.object.value).second) keep_clear.push_back(r.object);
      for (std::size_t i = 0; i < keep_clear.size(); ++i)
        for (const EntityId o : grasp_obstructors(keep_clear[i], w))
          if (seen.insert(o.value).second) keep_clear.push_back(o);
      if (transfer(w, actions, c, cabinet_, rng, limits, &keep_clear)) return;
      if (!transfer(w, actions, c, table_, rng, limits))
        throw SolverError("cabinet: no free destination pose");
    };

    // When the cabinet is too packed to admit a goal object, non-goal
    // occupants are evicted to the table until a spot opens.
    auto place_goal = [&](const Goal& g) {
      for (;;) {
        if (transfer(w, actions, g.object, g.dest, rng, limits)) return;
        if (g.dest != cabinet_) throw SolverError("cabinet: no free destination pose");
        std::vector<EntityId> victims;
        for (std::size_t i = 1; i < w.poses.size(); ++i) {
          const EntityId e{static_cast<std::uint32_t>(i)};
          if (w.symbolic.placements[i] != cabinet_) continue;
          if (!grasp_obstructors(e, w).empty()) continue;  // not reachable now
          bool pinned = false;
          for (const auto& r : remaining) pinned |= r.object == e;
          if (!pinned) victims.push_back(e);
        }
        if (victims.empty()) throw SolverError("cabinet: packed solid");
        const EntityId v = victims[rng.uniform_index(victims.size())];
        if (!transfer(w, actions, v, table_, rng, limits))
          throw SolverError("cabinet: no free destination pose");
      }
    };

    if (interchange) {
      std::vector<Goal> pickable;
      for (const auto& g : remaining)
        if (grasp_obstructors(g.object, w).empty()) pickable.push_back(g);
      if (!pickable.empty()) {
        place_goal(pickable[rng.uniform_index(pickable.size())]);
      } else {
        const auto& g = remaining[rng.uniform_index(remaining.size())];
        const EntityId c = find_clear_obstructor(g.object, w);
        if (!c.valid()) throw SolverError("cabinet: objects are mutually wedged");
        clear_blocker(c);
      }
    } else {
      const auto& g = remaining.front();
      if (const auto obs = grasp_obstructors(g.object, w); !obs.empty()) {
        const EntityId c = find_clear_obstructor(g.object, w);
        if (!c.valid()) throw SolverError("cabinet: objects are mutually wedged");
        clear_blocker(c);
      } else {
        place_goal(g);
      }
    }
  }

  Plan p;
  p.initial = state;
  p.terminal = std::move(w);
  p.total_cost = plan_total_cost(actions);
  p.actions = std::move(actions);
  return p;
}

Plan CabinetDomain::solve(const WorldState& state, const Task& task, Rng& rng,
                          const SolverLimits& limits) const {
  validate_state(state);
  if (task_satisfied(task, state)) {
    Plan p;
    p.initial = state;
    p.terminal = state;
    return p;
  }
  std::string last_error = "cabinet: no attempt made";
  for (int attempt = 0; attempt < limits.skeleton_retries; ++attempt) {
    try {
      return assemble(state, task, rng, limits);
    } catch (const SolverError& e) {
      last_error = e.what();
    }
  }
  throw SolverError(last_error + " (after retries) for " + task.label);
}

double CabinetDomain::action_cost(const WorldState& state, const GroundAction& a) const {
  switch (a.kind) {
    case ActionKind::Move:
      if (a.region.value >= scenario().regions.size() ||
          scenario().region(a.region).kind != RegionKind::Station)
        throw PlanError(0, "move destination is not a station");
      return distance(state.poses[0], station_point(a.region));
    case ActionKind::Pick:
    case ActionKind::Place:
      return kManipulationCost;
    default:
      throw PlanError(0, "cabinet does not support this action");
  }
}

WorldState CabinetDomain::apply(const WorldState& state, const GroundAction& a) const {
  WorldState out = state;
  switch (a.kind) {
    case ActionKind::Move: {
      if (a.region.value >= scenario().regions.size() ||
          scenario().region(a.region).kind != RegionKind::Station)
        throw PlanError(0, "move destination is not a station");
      const Pose2 pt = station_point(a.region);
      if (a.poses.size() != 1 || distance(a.poses[0], pt) > 1e-9)
        throw PlanError(0, "stamped pose does not match the station");
      out.symbolic.placements[0] = a.region;
      out.poses[0] = pt;
      break;
    }
    case ActionKind::Pick: {
      if (a.entities.size() != 1) throw PlanError(0, "pick takes one object");
      const EntityId o = a.entities[0];
      if (!o.valid() || o == kRobotId || o.value >= state.entity_count())
        throw PlanError(0, "pick names an invalid object");
      if (!state.symbolic.gripper.empty())
        throw PlanError(0, "gripper is already holding an object");
      const RegionId src = state.symbolic.placements[o.value];
      if (!src.valid()) throw PlanError(0, "object is not placed anywhere");
      if (state.symbolic.placements[0] != station_for(src))
        throw PlanError(0, "robot is not at the station serving the object");
      if (src == cabinet_ && !grasp_obstructors(o, state).empty())
        throw PlanError(0, "grasp channel is obstructed");
      out.symbolic.gripper.held = o;
      out.symbolic.placements[o.value] = RegionId{};
      break;
    }
    case ActionKind::Place: {
      if (a.entities.size() != 1 || a.poses.size() != 1)
        throw PlanError(0, "place takes one object and one pose");
      const EntityId o = a.entities[0];
      if (state.symbolic.gripper.held != std::optional<EntityId>(o))
        throw PlanError(0, "gripper does not hold the placed object");
      if (a.region != cabinet_ && a.region != table_)
        throw PlanError(0, "place destination is not a surface");
      if (state.symbolic.placements[0] != station_for(a.region))
        throw PlanError(0, "robot is not at the station serving the surface");
      const double r = scenario().radius(o);
      const Pose2& p = a.poses[0];
      const auto legal = scenario().region(a.region).rect.inset(r);
      if (p.x < legal.xmin - 1e-9 || p.x > legal.xmax + 1e-9 ||
          p.y < legal.ymin - 1e-9 || p.y > legal.ymax + 1e-9)
        throw PlanError(0, "placed object would overhang the surface");
      for (const auto& d : placed_discs(state))
        if (geom::disc_separation(p, r, d.center, d.radius) < -kOverlapEpsilon)
          throw PlanError(0, "placed object lands on another object");
      if (geom::disc_separation(p, r, state.poses[0], scenario().robot_radius()) <
          -kOverlapEpsilon)
        throw PlanError(0, "placed object lands on the robot");
      if (a.region == cabinet_ &&
          !geom::blockers(grasp_corridor(p, r), placed_discs(state), {}).empty())
        throw PlanError(0, "insertion channel is obstructed");
      out.symbolic.gripper.held.reset();
      out.symbolic.placements[o.value] = a.region;
      out.poses[o.value] = p;
      break;
    }
    default:
      throw PlanError(0, "cabinet does not support this action");
  }
  validate_state(out);
  return out;
}

WorldState CabinetDomain::random_state(Rng& rng) const {
  const auto& sc = scenario();
  for (int attempt = 0; attempt < 16; ++attempt) {
    WorldState s = sc.initial_state();
    s.symbolic.reached.reset();
    s.symbolic.gripper.held.reset();
    const RegionId rstation =
        rng.uniform() < 0.5 ? cabinet_station_ : table_station_;
    s.symbolic.placements[0] = rstation;
    s.poses[0] = station_point(rstation);

    std::vector<geom::Disc> occupied;
    occupied.push_back({kRobotId, s.poses[0], sc.robot_radius()});
    bool ok = true;
    for (std::size_t i = 1; i < sc.entity_count() && ok; ++i) {
      const EntityId e{static_cast<std::uint32_t>(i)};
      // The cabinet usually arrives well stocked; the table holds the rest.
      const RegionId reg = rng.uniform() < 0.7 ? cabinet_ : table_;
      const double r = sc.radius(e);
      std::function<bool(const Pose2&)> reject;
      if (reg == cabinet_) {
        // Fill through the front so every object stays extractable.
        reject = [this, r, &occupied](const Pose2& p) {
          return !geom::blockers(grasp_corridor(p, r), occupied, {}).empty();
        };
      }
      const auto pose = geom::sample_free_pose(sc.region(reg).rect, occupied, r, rng,
                                               geom::kDefaultMaxTries, reject);
      if (!pose) {
        ok = false;
        break;
      }
      s.symbolic.placements[i] = reg;
      s.poses[i] = *pose;
      occupied.push_back({e, *pose, r});
    }
    if (ok) {
      validate_state(s);
      return s;
    }
  }
  throw SolverError("cabinet: could not sample a state");
}

bool CabinetDomain::poses_feasible(const WorldState& s) const {
  std::vector<geom::Disc> inside;
  for (std::size_t i = 1; i < s.poses.size(); ++i)
    if (s.symbolic.placements[i] == cabinet_)
      inside.push_back({EntityId{static_cast<std::uint32_t>(i)}, s.poses[i],
                        scenario().radius(EntityId{static_cast<std::uint32_t>(i)})});

  // Peel objects whose extraction channel is clear of whatever remains.
  while (!inside.empty()) {
    bool removed = false;
    for (std::size_t k = 0; k < inside.size(); ++k) {
      const auto corridor = grasp_corridor(inside[k].center, inside[k].radius);
      const EntityId self[] = {inside[k].id};
      if (geom::blockers(corridor, inside, self).empty()) {
        inside.erase(inside.begin() + static_cast<std::ptrdiff_t>(k));
        removed = true;
        break;
      }
    }
    if (!removed) return false;  // remaining objects wedge each other in
  }
  return true;
}

GraphLayout CabinetDomain::graph_layout() const {
  GraphLayout layout;
  layout.kind_count = 3;
  layout.nodes.push_back({GraphLayout::Node::Kind::Robot, kRobotId, RegionId{}});
  layout.nodes.push_back({GraphLayout::Node::Kind::Container, EntityId{}, cabinet_});
  layout.nodes.push_back({GraphLayout::Node::Kind::Container, EntityId{}, table_});
  for (std::size_t i = 1; i < scenario().entity_count(); ++i)
    layout.nodes.push_back({GraphLayout::Node::Kind::Object,
                            EntityId{static_cast<std::uint32_t>(i)}, RegionId{}});
  return layout;
}

}  // namespace anttamp
