#include "anttamp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace anttamp {
namespace {

using nlohmann::json;

const char* domain_name(DomainKind d) {
  return d == DomainKind::Namo ? "namo" : "cabinet";
}

DomainKind parse_domain(const std::string& s) {
  if (s == "namo") return DomainKind::Namo;
  if (s == "cabinet") return DomainKind::Cabinet;
  throw ScenarioError("unknown domain: " + s);
}

const char* region_kind_name(RegionKind k) {
  return k == RegionKind::Surface ? "surface" : "station";
}

RegionKind parse_region_kind(const std::string& s) {
  if (s == "surface") return RegionKind::Surface;
  if (s == "station") return RegionKind::Station;
  throw ScenarioError("unknown region kind: " + s);
}

const char* front_name(FrontEdge f) {
  switch (f) {
    case FrontEdge::North: return "north";
    case FrontEdge::South: return "south";
    case FrontEdge::East: return "east";
    case FrontEdge::West: return "west";
  }
  return "?";
}

FrontEdge parse_front(const std::string& s) {
  if (s == "north") return FrontEdge::North;
  if (s == "south") return FrontEdge::South;
  if (s == "east") return FrontEdge::East;
  if (s == "west") return FrontEdge::West;
  throw ScenarioError("unknown front edge: " + s);
}

geom::Rect rect_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw ScenarioError("rect must be [xmin, ymin, xmax, ymax]");
  geom::Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
               j[3].get<double>()};
  if (!(r.xmin <= r.xmax && r.ymin <= r.ymax))
    throw ScenarioError("rect has negative extent");
  return r;
}

json rect_to_json(const geom::Rect& r) {
  return json::array({r.xmin, r.ymin, r.xmax, r.ymax});
}

Pose2 pose_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError("pose must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ScenarioError(std::string(what) + " is not finite");
  return v;
}

}  // namespace

RegionId Scenario::region_by_name(const std::string& name) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].name == name) return RegionId{static_cast<std::uint32_t>(i)};
  throw ScenarioError("no region named '" + name + "'");
}

EntityId Scenario::entity_by_name(const std::string& name) const {
  for (std::size_t i = 0; i < entities.size(); ++i)
    if (entities[i].name == name) return EntityId{static_cast<std::uint32_t>(i)};
  throw ScenarioError("no entity named '" + name + "'");
}

WorldState Scenario::initial_state() const {
  WorldState s;
  s.symbolic.placements.reserve(entities.size());
  s.poses.reserve(entities.size());
  for (const auto& e : entities) {
    s.symbolic.placements.push_back(e.initial_region);
    s.poses.push_back(e.initial_pose);
  }
  return s;
}

void Scenario::validate() const {
  if (schema_version != 1) throw ScenarioError("unsupported schema_version");
  if (regions.empty()) throw ScenarioError("scenario has no regions");
  if (entities.empty()) throw ScenarioError("scenario has no entities");
  if (entities[0].class_id != kNoClass)
    throw ScenarioError("entity 0 must be the robot (no class)");
  if (!(clearance > 0.0)) throw ScenarioError("clearance must be positive");
  finite(clearance, "clearance");
  if (workspace.width() <= 0.0 || workspace.height() <= 0.0)
    throw ScenarioError("workspace has no area");

  std::unordered_set<std::string> names;
  for (const auto& r : regions) {
    if (!names.insert(r.name).second)
      throw ScenarioError("duplicate region name '" + r.name + "'");
    if (!workspace.contains(r.rect.center()))
      throw ScenarioError("region '" + r.name + "' lies outside the workspace");
    if (r.kind == RegionKind::Station &&
        (r.rect.width() != 0.0 || r.rect.height() != 0.0))
      throw ScenarioError("station region '" + r.name + "' must be a point");
    if (r.kind == RegionKind::Surface && r.rect.area() <= 0.0)
      throw ScenarioError("surface region '" + r.name + "' has no area");
  }

  names.clear();
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto& e = entities[i];
    if (!names.insert(e.name).second)
      throw ScenarioError("duplicate entity name '" + e.name + "'");
    if (!(e.radius > 0.0)) throw ScenarioError("entity '" + e.name + "' needs a positive radius");
    finite(e.initial_pose.x, "pose");
    finite(e.initial_pose.y, "pose");
    if (e.initial_region.value >= regions.size())
      throw ScenarioError("entity '" + e.name + "' references an unknown region");
    if (i > 0 && e.class_id != kNoClass && e.class_id >= class_names.size())
      throw ScenarioError("entity '" + e.name + "' references an unknown class");
    const auto& reg = regions[e.initial_region.value];
    const double tol = 1e-9;
    if (e.initial_pose.x < reg.rect.xmin - tol || e.initial_pose.x > reg.rect.xmax + tol ||
        e.initial_pose.y < reg.rect.ymin - tol || e.initial_pose.y > reg.rect.ymax + tol)
      throw ScenarioError("entity '" + e.name + "' starts outside its region");
  }

  // No two discs may interpenetrate beyond the overlap epsilon.
  for (std::size_t i = 0; i < entities.size(); ++i)
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      const double sep =
          distance(entities[i].initial_pose, entities[j].initial_pose) -
          entities[i].radius - entities[j].radius;
      if (sep < -kOverlapEpsilon)
        throw ScenarioError("entities '" + entities[i].name + "' and '" +
                            entities[j].name + "' overlap");
    }

  if (domain == DomainKind::Namo) {
    region_by_name("floor");
    if (region(region_by_name("home")).kind != RegionKind::Station)
      throw ScenarioError("namo 'home' region must be a station");
  } else {
    for (const char* n : {"cabinet", "table"})
      if (region(region_by_name(n)).kind != RegionKind::Surface)
        throw ScenarioError(std::string("cabinet '") + n + "' region must be a surface");
    for (const char* n : {"cabinet_station", "table_station"})
      if (region(region_by_name(n)).kind != RegionKind::Station)
        throw ScenarioError(std::string("'") + n + "' must be a station");
    if (!region(region_by_name("cabinet")).front)
      throw ScenarioError("cabinet region needs a front edge");
    if (class_names.empty())
      throw ScenarioError("cabinet scenario needs object classes");
  }
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    Scenario s;
    s.schema_version = j.at("schema_version").get<int>();
    s.domain = parse_domain(j.at("domain").get<std::string>());
    s.workspace = rect_from_json(j.at("workspace"));
    s.clearance = j.value("clearance", 0.01);
    if (j.contains("classes"))
      s.class_names = j.at("classes").get<std::vector<std::string>>();

    for (const auto& rj : j.at("regions")) {
      Region r;
      r.name = rj.at("name").get<std::string>();
      r.kind = parse_region_kind(rj.at("kind").get<std::string>());
      r.rect = rect_from_json(rj.at("rect"));
      if (rj.contains("front")) r.front = parse_front(rj.at("front").get<std::string>());
      s.regions.push_back(std::move(r));
    }

    auto read_entity = [&](const json& ej, bool robot) {
      EntitySpec e;
      e.name = robot ? ej.value("name", "robot") : ej.at("name").get<std::string>();
      if (!robot) {
        const auto cls = ej.at("class").get<std::string>();
        auto it = std::find(s.class_names.begin(), s.class_names.end(), cls);
        if (it == s.class_names.end())
          throw ScenarioError("entity '" + e.name + "' has unknown class '" + cls + "'");
        e.class_id = static_cast<std::uint8_t>(it - s.class_names.begin());
      }
      e.radius = ej.at("radius").get<double>();
      e.initial_region = s.region_by_name(ej.at("region").get<std::string>());
      e.initial_pose = pose_from_json(ej.at("pose"));
      return e;
    };
    s.entities.push_back(read_entity(j.at("robot"), true));
    for (const auto& ej : j.at("entities")) s.entities.push_back(read_entity(ej, false));

    if (j.contains("options")) {
      const auto& o = j.at("options");
      s.multi_class_tasks = o.value("multi_class_tasks", false);
      s.interchangeable_obstruction = o.value("interchangeable_obstruction", true);
    }

    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario schema error: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["domain"] = domain_name(s.domain);
  j["workspace"] = rect_to_json(s.workspace);
  j["clearance"] = s.clearance;
  if (!s.class_names.empty()) j["classes"] = s.class_names;
  j["regions"] = json::array();
  for (const auto& r : s.regions) {
    json rj{{"name", r.name},
            {"kind", region_kind_name(r.kind)},
            {"rect", rect_to_json(r.rect)}};
    if (r.front) rj["front"] = front_name(*r.front);
    j["regions"].push_back(std::move(rj));
  }
  auto entity_json = [&](const EntitySpec& e, bool robot) {
    json ej{{"name", e.name},
            {"radius", e.radius},
            {"region", s.regions[e.initial_region.value].name},
            {"pose", json::array({e.initial_pose.x, e.initial_pose.y})}};
    if (!robot) ej["class"] = s.class_names[e.class_id];
    return ej;
  };
  j["robot"] = entity_json(s.entities[0], true);
  j["entities"] = json::array();
  for (std::size_t i = 1; i < s.entities.size(); ++i)
    j["entities"].push_back(entity_json(s.entities[i], false));
  if (s.domain == DomainKind::Cabinet)
    j["options"] = {{"multi_class_tasks", s.multi_class_tasks},
                    {"interchangeable_obstruction", s.interchangeable_obstruction}};
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file: " + path);
  out << scenario_to_json(s);
}

}  // namespace anttamp
