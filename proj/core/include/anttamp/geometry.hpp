#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "anttamp/rng.hpp"
#include "anttamp/types.hpp"

namespace anttamp::geom {

struct Segment {
  Pose2 a;
  Pose2 b;

  double length() const { return distance(a, b); }
};

/// Straight approach channel: the robot (or a carried object) sweeps the
/// spine with a disc of half_width.
struct Corridor {
  Segment spine;
  double half_width = 0.0;
};

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Pose2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  Pose2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  /// Rect shrunk by m on every side; collapses to the center line/point when m
  /// exceeds the half-extent.
  Rect inset(double m) const;
};

/// Disc view of one entity, assembled by the caller from scenario + state.
struct Disc {
  EntityId id;
  Pose2 center;
  double radius = 0.0;
};

double point_segment_distance(const Pose2& p, const Segment& s);

/// Projection parameter of p onto the segment's supporting line, clamped to
/// [0, 1]. Degenerate segments project to 0.
double segment_projection(const Pose2& p, const Segment& s);

/// True iff the disc intrudes into the corridor:
/// distance(center, spine) < half_width + radius (strict).
bool blocks(const Corridor& corridor, const Pose2& obstacle_center, double obstacle_radius);

/// Ids of discs in `candidates` that block the corridor and are not in
/// `ignore`, ordered by projection along the spine from its `a` end.
std::vector<EntityId> blockers(const Corridor& corridor, std::span<const Disc> candidates,
                               std::span<const EntityId> ignore);

inline bool contains_id(std::span<const EntityId> ids, EntityId id) {
  for (EntityId x : ids) {
    if (x == id) return true;
  }
  return false;
}

/// Separation margin between two discs: distance minus sum of radii.
inline double disc_separation(const Pose2& a, double ra, const Pose2& b, double rb) {
  return distance(a, b) - (ra + rb);
}

inline constexpr int kDefaultMaxTries = 256;

/// Rejection-sample a pose for a disc of `radius` inside `region`, keeping
/// every pairwise separation against `occupied` nonnegative. The sample is
/// drawn in the rect inset by `radius` so the disc stays within the
/// footprint. `extra_reject` (optional) vetoes otherwise-free poses.
/// Returns nullopt after max_tries rejections.
std::optional<Pose2> sample_free_pose(const Rect& region, std::span<const Disc> occupied,
                                      double radius, Rng& rng, int max_tries = kDefaultMaxTries,
                                      const std::function<bool(const Pose2&)>& extra_reject = {});

}  // namespace anttamp::geom
