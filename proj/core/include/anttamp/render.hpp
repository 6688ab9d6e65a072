#pragma once

#include <string>

#include "anttamp/domain.hpp"

namespace anttamp {

/// Deterministic top-down SVG of a world state: regions, stations, robot,
/// and objects colored by class. Identical states render byte-identically.
std::string render_svg(const Domain& domain, const WorldState& state);

void save_svg(const Domain& domain, const WorldState& state, const std::string& path);

}  // namespace anttamp
