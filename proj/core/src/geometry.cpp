#include "anttamp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace anttamp::geom {

Rect Rect::inset(double m) const {
  Rect r;
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  r.xmin = std::min(xmin + m, cx);
  r.xmax = std::max(xmax - m, cx);
  r.ymin = std::min(ymin + m, cy);
  r.ymax = std::max(ymax - m, cy);
  return r;
}

double segment_projection(const Pose2& p, const Segment& s) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 <= 0.0) return 0.0;
  const double t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2;
  return std::clamp(t, 0.0, 1.0);
}

double point_segment_distance(const Pose2& p, const Segment& s) {
  const double t = segment_projection(p, s);
  const Pose2 q{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
  return distance(p, q);
}

bool blocks(const Corridor& corridor, const Pose2& obstacle_center, double obstacle_radius) {
  return point_segment_distance(obstacle_center, corridor.spine) <
         corridor.half_width + obstacle_radius;
}

std::vector<EntityId> blockers(const Corridor& corridor, std::span<const Disc> candidates,
                               std::span<const EntityId> ignore) {
  std::vector<std::pair<double, EntityId>> hits;
  for (const Disc& d : candidates) {
    if (contains_id(ignore, d.id)) continue;
    if (blocks(corridor, d.center, d.radius)) {
      hits.emplace_back(segment_projection(d.center, corridor.spine), d.id);
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  std::vector<EntityId> out;
  out.reserve(hits.size());
  for (const auto& [t, id] : hits) out.push_back(id);
  return out;
}

std::optional<Pose2> sample_free_pose(const Rect& region, std::span<const Disc> occupied,
                                      double radius, Rng& rng, int max_tries,
                                      const std::function<bool(const Pose2&)>& extra_reject) {
  const Rect inner = region.inset(radius);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Pose2 p{rng.uniform(inner.xmin, inner.xmax), rng.uniform(inner.ymin, inner.ymax)};
    bool free = true;
    for (const Disc& d : occupied) {
      if (disc_separation(p, radius, d.center, d.radius) < 0.0) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    if (extra_reject && extra_reject(p)) continue;
    return p;
  }
  return std::nullopt;
}

}  // namespace anttamp::geom
