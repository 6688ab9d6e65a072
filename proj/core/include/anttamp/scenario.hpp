#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anttamp/geometry.hpp"
#include "anttamp/ids.hpp"
#include "anttamp/types.hpp"

namespace anttamp {

enum class DomainKind : std::uint8_t { Namo, Cabinet };

enum class RegionKind : std::uint8_t {
  Surface,  // area region that objects occupy
  Station,  // point the robot stands at (zero-area rect)
};

enum class FrontEdge : std::uint8_t { North, South, East, West };

struct Region {
  std::string name;
  geom::Rect rect;
  RegionKind kind = RegionKind::Surface;
  std::optional<FrontEdge> front;  // open side, cabinet regions only
};

inline constexpr std::uint8_t kNoClass = 0xff;

struct EntitySpec {
  std::string name;
  std::uint8_t class_id = kNoClass;  // index into Scenario::class_names; robot has none
  double radius = 0.0;
  RegionId initial_region;
  Pose2 initial_pose;
};

/// Static description of a deployment environment. Entity 0 is the robot;
/// all other entities are movable discs. Every module consumes scenarios
/// through this struct (file loader or in-code factory).
struct Scenario {
  int schema_version = 1;
  DomainKind domain = DomainKind::Namo;
  geom::Rect workspace;
  double clearance = 0.01;
  std::vector<std::string> class_names;
  std::vector<Region> regions;
  std::vector<EntitySpec> entities;  // [0] = robot

  // Cabinet options.
  bool multi_class_tasks = false;
  bool interchangeable_obstruction = true;

  std::size_t entity_count() const { return entities.size(); }
  std::size_t movable_count() const { return entities.size() - 1; }
  double robot_radius() const { return entities[0].radius; }
  double radius(EntityId e) const { return entities[e.value].radius; }
  std::uint8_t class_of(EntityId e) const { return entities[e.value].class_id; }
  const Region& region(RegionId r) const { return regions[r.value]; }

  RegionId region_by_name(const std::string& name) const;
  EntityId entity_by_name(const std::string& name) const;

  /// State with every entity at its declared initial placement/pose.
  WorldState initial_state() const;

  /// Structural validation: id resolution, footprint membership, overlaps,
  /// per-domain required regions. Throws ScenarioError.
  void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace anttamp
