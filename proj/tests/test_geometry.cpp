#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "anttamp/geometry.hpp"

using namespace anttamp;
using namespace anttamp::geom;

namespace {

// Reference distance: dense sweep of points along the segment.
double sampled_segment_distance(const Pose2& p, const Segment& s, int steps = 20000) {
  double best = distance(p, s.a);
  for (int i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    const Pose2 q{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
    best = std::min(best, distance(p, q));
  }
  return best;
}

}  // namespace

TEST_CASE("point_segment_distance agrees with a dense sweep") {
  const Segment s{{0.3, -1.2}, {2.7, 1.9}};
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    const Pose2 p{rng.uniform(-2.0, 4.0), rng.uniform(-3.0, 3.0)};
    const double analytic = point_segment_distance(p, s);
    const double sampled = sampled_segment_distance(p, s);
    CHECK(analytic == doctest::Approx(sampled).epsilon(1e-6));
  }
}

TEST_CASE("point_segment_distance hand cases") {
  const Segment s{{0, 0}, {4, 0}};
  CHECK(point_segment_distance({2, 3}, s) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(point_segment_distance({-3, 4}, s) == doctest::Approx(5.0).epsilon(1e-12));  // off the a end
  CHECK(point_segment_distance({7, 4}, s) == doctest::Approx(5.0).epsilon(1e-12));   // off the b end
  CHECK(point_segment_distance({2, 0}, s) == 0.0);

  const Segment degenerate{{1, 1}, {1, 1}};
  CHECK(point_segment_distance({4, 5}, degenerate) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("segment_projection clamps and handles degeneracy") {
  const Segment s{{0, 0}, {10, 0}};
  CHECK(segment_projection({3, 5}, s) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(segment_projection({-2, 0}, s) == 0.0);
  CHECK(segment_projection({15, 1}, s) == 1.0);
  CHECK(segment_projection({5, 5}, Segment{{2, 2}, {2, 2}}) == 0.0);
}

TEST_CASE("blocks is strict at the tangency boundary") {
  const Corridor c{{{0, 0}, {4, 0}}, 0.5};
  // Disc of radius 0.3: blocking iff center is within 0.8 of the spine.
  CHECK(blocks(c, {2.0, 0.79}, 0.3));
  CHECK_FALSE(blocks(c, {2.0, 0.8}, 0.3));  // exactly tangent does not block
  CHECK_FALSE(blocks(c, {2.0, 0.81}, 0.3));
  CHECK(blocks(c, {2.0, 0.0}, 0.3));                // dead center
  CHECK(blocks(c, {4.7, 0.0}, 0.3));                // past the end but within reach
  CHECK_FALSE(blocks(c, {4.8001, 0.0}, 0.3));
}

TEST_CASE("blocks agrees with an area-sampling oracle away from the boundary") {
  const Corridor c{{{0.2, 0.4}, {3.1, 2.6}}, 0.37};
  Rng rng(77);
  for (int i = 0; i < 30; ++i) {
    const Pose2 center{rng.uniform(-1.0, 4.0), rng.uniform(-1.0, 4.0)};
    const double radius = rng.uniform(0.05, 0.5);
    // Oracle: does any point of the obstacle disc lie strictly inside the
    // swept channel? Sampled on a polar grid over the disc.
    bool sampled_hit = false;
    for (int a = 0; a < 360 && !sampled_hit; ++a) {
      for (int r = 0; r <= 40; ++r) {
        const double rr = radius * r / 40.0;
        const double th = a * 3.14159265358979323846 / 180.0;
        const Pose2 q{center.x + rr * std::cos(th), center.y + rr * std::sin(th)};
        if (point_segment_distance(q, c.spine) < c.half_width) {
          sampled_hit = true;
          break;
        }
      }
    }
    // Skip near-tangent cases the grid cannot resolve.
    const double margin = point_segment_distance(center, c.spine) - (c.half_width + radius);
    if (std::abs(margin) < 0.02) continue;
    CHECK(blocks(c, center, radius) == sampled_hit);
  }
}

TEST_CASE("blockers orders by projection and honors the ignore list") {
  const Corridor c{{{0, 0}, {10, 0}}, 0.5};
  // Ids deliberately scrambled relative to spine order.
  std::vector<Disc> discs{
      {EntityId{4}, {7.0, 0.2}, 0.2},
      {EntityId{1}, {2.0, -0.1}, 0.2},
      {EntityId{9}, {5.0, 3.0}, 0.2},   // clear of the corridor
      {EntityId{2}, {4.5, 0.3}, 0.2},
  };
  const auto order = blockers(c, discs, {});
  REQUIRE(order.size() == 3);
  CHECK(order[0] == EntityId{1});
  CHECK(order[1] == EntityId{2});
  CHECK(order[2] == EntityId{4});

  const EntityId skip[] = {EntityId{2}};
  const auto filtered = blockers(c, discs, skip);
  REQUIRE(filtered.size() == 2);
  CHECK(filtered[0] == EntityId{1});
  CHECK(filtered[1] == EntityId{4});
}

TEST_CASE("rect inset shrinks and collapses past the half-extent") {
  const Rect r{0, 0, 4, 2};
  const Rect in = r.inset(0.5);
  CHECK(in.xmin == 0.5);
  CHECK(in.ymax == 1.5);
  CHECK(r.contains({0, 0}));
  CHECK_FALSE(in.contains({0.2, 1.0}));

  const Rect collapsed = r.inset(3.0);  // exceeds the y half-extent
  CHECK(collapsed.ymin == collapsed.ymax);
  CHECK(collapsed.ymin == doctest::Approx(1.0));
  CHECK(collapsed.xmin == collapsed.xmax);
  CHECK(collapsed.xmin == doctest::Approx(2.0));
  CHECK(r.center().x == 2.0);
  CHECK(r.area() == 8.0);
}

TEST_CASE("disc_separation sign convention") {
  CHECK(disc_separation({0, 0}, 1.0, {3, 0}, 1.0) == doctest::Approx(1.0));
  CHECK(disc_separation({0, 0}, 1.0, {1.5, 0}, 1.0) == doctest::Approx(-0.5));
  CHECK(disc_separation({0, 0}, 1.0, {2, 0}, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("sample_free_pose respects region, occupancy, and the veto") {
  const Rect region{0, 0, 2, 2};
  const double radius = 0.25;
  std::vector<Disc> occupied{{EntityId{1}, {1.0, 1.0}, 0.3}};
  Rng rng(13);

  SUBCASE("accepted poses are collision-free and inside the inset rect") {
    for (int i = 0; i < 200; ++i) {
      const auto p = sample_free_pose(region, occupied, radius, rng);
      REQUIRE(p.has_value());
      CHECK(region.inset(radius).contains(*p));
      CHECK(disc_separation(*p, radius, occupied[0].center, occupied[0].radius) >= 0.0);
    }
  }

  SUBCASE("impossible packing returns nullopt") {
    std::vector<Disc> wall{{EntityId{1}, {1.0, 1.0}, 2.9}};  // covers the whole rect
    CHECK_FALSE(sample_free_pose(region, wall, radius, rng).has_value());
  }

  SUBCASE("the extra veto is honored") {
    int calls = 0;
    const auto p = sample_free_pose(region, occupied, radius, rng, 64,
                                    [&](const Pose2&) {
                                      ++calls;
                                      return true;  // reject everything
                                    });
    CHECK_FALSE(p.has_value());
    CHECK(calls >= 1);  // veto runs only on collision-free candidates
    CHECK(calls <= 64);

    const auto q = sample_free_pose(region, occupied, radius, rng, 64,
                                    [](const Pose2& cand) { return cand.x > 0.9; });
    REQUIRE(q.has_value());
    CHECK(q->x <= 0.9);
  }
}
