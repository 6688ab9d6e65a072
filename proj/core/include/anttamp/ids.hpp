#pragma once

#include <cstdint>
#include <functional>

namespace anttamp {

/// Dense index into a scenario's entity table. Entity 0 is always the robot.
struct EntityId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  friend constexpr bool operator==(EntityId a, EntityId b) { return a.value == b.value; }
  friend constexpr bool operator!=(EntityId a, EntityId b) { return a.value != b.value; }
  friend constexpr bool operator<(EntityId a, EntityId b) { return a.value < b.value; }
};

/// Dense index into a scenario's region table.
struct RegionId {
  std::uint32_t value = UINT32_MAX;

  constexpr bool valid() const { return value != UINT32_MAX; }
  friend constexpr bool operator==(RegionId a, RegionId b) { return a.value == b.value; }
  friend constexpr bool operator!=(RegionId a, RegionId b) { return a.value != b.value; }
  friend constexpr bool operator<(RegionId a, RegionId b) { return a.value < b.value; }
};

inline constexpr EntityId kRobotId{0};

}  // namespace anttamp

template <>
struct std::hash<anttamp::EntityId> {
  size_t operator()(anttamp::EntityId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
template <>
struct std::hash<anttamp::RegionId> {
  size_t operator()(anttamp::RegionId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
