#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "anttamp/cabinet.hpp"
#include "anttamp/estimators.hpp"
#include "anttamp/namo.hpp"
#include "anttamp/oracle.hpp"
#include "anttamp/scene_graph.hpp"

using namespace anttamp;

namespace {

// 3-block floor with hand-placed poses: block2 sits in the straight channel
// robot->block1, block3 is off to the side.
struct NamoGraphFixture {
  NamoGraphFixture() : domain(make_domain(make_namo_scenario(params()))) {
    w = domain->scenario().initial_state();
    w.poses[0] = {2.0, 2.0};
    w.poses[1] = {3.5, 2.0};
    w.poses[2] = {2.6, 2.1};
    w.poses[3] = {2.6, 3.5};
    domain->validate_state(w);
  }

  static NamoScenarioParams params() {
    NamoScenarioParams p;
    p.object_count = 3;
    return p;
  }

  std::unique_ptr<Domain> domain;
  WorldState w;
};

// Index of the i->j edge; fails the test if the graph lacks it.
std::size_t edge_index(const SceneGraph& g, int src, int dst) {
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (g.edges[k].src == src && g.edges[k].dst == dst) return k;
  REQUIRE(false);
  return 0;
}

TaskDistribution singleton(const Task& task) {
  TaskDistribution d;
  d.entries.push_back({task, 1.0});
  return d;
}

}  // namespace

TEST_CASE("floor states encode as dense two-kind graphs") {
  const NamoGraphFixture fx;
  const SceneGraph g = encode_state(*fx.domain, fx.w);

  REQUIRE(g.node_count == 4);
  CHECK(g.node_dim == 5);  // robot/object one-hot + x + y + distance
  CHECK(g.edge_dim == 2);
  REQUIRE(g.edges.size() == 12);  // both orientations of C(4,2) pairs
  CHECK(g.node_features.size() == 4 * 5);
  CHECK(g.edge_features.size() == 12 * 2);

  // Robot node: [1,0], its pose, zero self-distance.
  CHECK(g.node_feature(0, 0) == 1.0);
  CHECK(g.node_feature(0, 1) == 0.0);
  CHECK(g.node_feature(0, 2) == 2.0);
  CHECK(g.node_feature(0, 3) == 2.0);
  CHECK(g.node_feature(0, 4) == 0.0);

  // Object nodes: [0,1], pose, Euclidean distance to the robot.
  for (int i = 1; i < 4; ++i) {
    CHECK(g.node_feature(i, 0) == 0.0);
    CHECK(g.node_feature(i, 1) == 1.0);
    CHECK(g.node_feature(i, 2) == fx.w.poses[static_cast<std::size_t>(i)].x);
    CHECK(g.node_feature(i, 3) == fx.w.poses[static_cast<std::size_t>(i)].y);
    const double d = distance(fx.w.poses[static_cast<std::size_t>(i)], fx.w.poses[0]);
    CHECK(g.node_feature(i, 4) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("edges come in orientation pairs sharing features") {
  const NamoGraphFixture fx;
  const SceneGraph g = encode_state(*fx.domain, fx.w);

  for (std::size_t k = 0; k + 1 < g.edges.size(); k += 2) {
    CHECK(g.edges[k].src == g.edges[k + 1].dst);
    CHECK(g.edges[k].dst == g.edges[k + 1].src);
    CHECK(g.edge_feature(k, 0) == g.edge_feature(k + 1, 0));
    CHECK(g.edge_feature(k, 1) == g.edge_feature(k + 1, 1));
  }

  // First edge feature is the endpoint distance.
  const std::size_t e01 = edge_index(g, 0, 1);
  CHECK(g.edge_feature(e01, 0) == doctest::Approx(1.5).epsilon(1e-12));
  const std::size_t e23 = edge_index(g, 2, 3);
  CHECK(g.edge_feature(e23, 0) == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("edge obstacle counts see exactly the discs in the channel") {
  const NamoGraphFixture fx;
  const SceneGraph g = encode_state(*fx.domain, fx.w);

  // block2 is 0.1 off the robot->block1 spine, well inside the channel.
  CHECK(g.edge_feature(edge_index(g, 0, 1), 1) == 1.0);
  // block3 is 1.5 away from that spine; nothing blocks the other routes.
  CHECK(g.edge_feature(edge_index(g, 0, 3), 1) == 0.0);
  CHECK(g.edge_feature(edge_index(g, 2, 3), 1) == 0.0);

  // Endpoints never count as their own obstacles: moving block2 onto the
  // robot->block3 spine raises exactly that count.
  NamoGraphFixture moved;
  moved.w.poses[2] = {2.3, 2.75};  // midway along robot->block3
  moved.domain->validate_state(moved.w);
  const SceneGraph g2 = encode_state(*moved.domain, moved.w);
  CHECK(g2.edge_feature(edge_index(g2, 0, 3), 1) == 1.0);
  CHECK(g2.edge_feature(edge_index(g2, 0, 1), 1) == 0.0);
}

TEST_CASE("shelf states encode containers as zero-radius landmark nodes") {
  CabinetScenarioParams p;
  p.per_class = 1;
  const auto domain = make_domain(make_cabinet_scenario(p));
  const auto* cab = dynamic_cast<const CabinetDomain*>(domain.get());
  REQUIRE(cab != nullptr);
  const WorldState w = domain->scenario().initial_state();
  const SceneGraph g = encode_state(*domain, w);

  REQUIRE(g.node_count == 6);  // robot, cabinet, table, three objects
  CHECK(g.node_dim == 6);      // three-kind one-hot + x + y + distance

  // One-hots: robot, then containers, then objects.
  CHECK(g.node_feature(0, 0) == 1.0);
  CHECK(g.node_feature(1, 1) == 1.0);
  CHECK(g.node_feature(2, 1) == 1.0);
  for (int i = 3; i < 6; ++i) {
    CHECK(g.node_feature(i, 0) == 0.0);
    CHECK(g.node_feature(i, 1) == 0.0);
    CHECK(g.node_feature(i, 2) == 1.0);
  }

  // Container nodes sit at their region centres.
  const auto& sc = domain->scenario();
  const Pose2 cab_c = sc.region(cab->cabinet()).rect.center();
  const Pose2 tab_c = sc.region(cab->table()).rect.center();
  CHECK(g.node_feature(1, 3) == cab_c.x);
  CHECK(g.node_feature(1, 4) == cab_c.y);
  CHECK(g.node_feature(2, 3) == tab_c.x);
  CHECK(g.node_feature(2, 4) == tab_c.y);

  // Edges into containers never count obstacles, even with stocked shelves.
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (g.edges[k].src == 1 || g.edges[k].dst == 1 || g.edges[k].src == 2 ||
        g.edges[k].dst == 2)
      CHECK(g.edge_feature(k, 1) == 0.0);
  }
}

TEST_CASE("a held object rides with the robot and stops obstructing") {
  CabinetScenarioParams p;
  p.per_class = 1;
  const auto domain = make_domain(make_cabinet_scenario(p));
  WorldState w = domain->scenario().initial_state();
  w.symbolic.gripper.held = EntityId{2};

  const SceneGraph g = encode_state(*domain, w);
  // Node 4 is entity 2: pose and distance collapse onto the robot.
  CHECK(g.node_feature(4, 3) == w.poses[0].x);
  CHECK(g.node_feature(4, 4) == w.poses[0].y);
  CHECK(g.node_feature(4, 5) == 0.0);
  CHECK(g.edge_feature(edge_index(g, 0, 4), 0) == 0.0);

  // And it leaves the obstacle census entirely.
  WorldState blocked = domain->scenario().initial_state();
  blocked.poses[0] = {1.0, 1.0};
  blocked.poses[1] = {2.0, 1.0};
  blocked.poses[2] = {1.5, 1.02};  // squarely in the robot->mug channel
  blocked.poses[3] = {0.5, 2.2};
  const SceneGraph before = encode_state(*domain, blocked);
  CHECK(before.edge_feature(edge_index(before, 0, 3), 1) == 1.0);
  blocked.symbolic.gripper.held = EntityId{2};
  const SceneGraph after = encode_state(*domain, blocked);
  CHECK(after.edge_feature(edge_index(after, 0, 3), 1) == 0.0);
}

TEST_CASE("interchangeable same-class discs are skipped by the census") {
  CabinetScenarioParams p;
  p.per_class = 2;
  auto poses = [](WorldState& w) {
    w.poses[0] = {1.0, 1.0};   // robot
    w.poses[1] = {2.0, 1.0};   // mug0, channel endpoint
    w.poses[2] = {1.5, 1.02};  // mug1, inside the channel
    w.poses[3] = {0.5, 2.0};
    w.poses[4] = {0.6, 2.3};
    w.poses[5] = {2.3, 2.0};
    w.poses[6] = {2.4, 2.3};
  };

  const auto swap_ok = make_domain(make_cabinet_scenario(p));
  WorldState a = swap_ok->scenario().initial_state();
  poses(a);
  const SceneGraph ga = encode_state(*swap_ok, a);
  CHECK(ga.edge_feature(edge_index(ga, 0, 3), 1) == 0.0);

  p.interchangeable_obstruction = false;
  const auto strict = make_domain(make_cabinet_scenario(p));
  WorldState b = strict->scenario().initial_state();
  poses(b);
  const SceneGraph gb = encode_state(*strict, b);
  CHECK(gb.edge_feature(edge_index(gb, 0, 3), 1) == 1.0);
}

TEST_CASE("expected next-task cost is linear in the task mixture") {
  NamoScenarioParams p;
  p.object_count = 3;
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(21, "state"));
  const WorldState w = domain->random_state(rng);
  const TaskDistribution full = domain->task_distribution();

  double manual = 0.0;
  for (const auto& entry : full.entries)
    manual += entry.probability * oracle_vap(*domain, w, singleton(entry.task));
  const double pooled = oracle_vap(*domain, w, full);
  CHECK(std::abs(pooled - manual) <= 1e-9);
}

TEST_CASE("zero-probability tasks contribute nothing") {
  NamoScenarioParams p;
  p.object_count = 3;
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(22, "state"));
  const WorldState w = domain->random_state(rng);
  const TaskDistribution full = domain->task_distribution();

  TaskDistribution padded = singleton(full.entries[0].task);
  padded.entries.push_back({full.entries[1].task, 0.0});
  padded.entries.push_back({full.entries[2].task, 0.0});
  CHECK(oracle_vap(*domain, w, padded) ==
        oracle_vap(*domain, w, singleton(full.entries[0].task)));
}

TEST_CASE("more goal draws per task can only lower the estimate") {
  NamoScenarioParams p;
  p.object_count = 3;
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(23, "state"));
  const TaskDistribution full = domain->task_distribution();

  for (int s = 0; s < 4; ++s) {
    const WorldState w = domain->random_state(rng);
    OracleParams one;
    one.samples_per_task = 1;
    OracleParams five;
    five.samples_per_task = 5;
    CHECK(oracle_vap(*domain, w, full, five) <=
          oracle_vap(*domain, w, full, one) + 1e-12);
  }
}

TEST_CASE("the oracle estimator is oracle_vap over the deployment mixture") {
  NamoScenarioParams p;
  p.object_count = 3;
  const auto domain = make_domain(make_namo_scenario(p));
  Rng rng(derive_seed(24, "state"));
  const WorldState w = domain->random_state(rng);

  const OracleEstimator est(*domain);
  CHECK(est.name() == "oracle");
  CHECK(est.estimate(*domain, w) ==
        oracle_vap(*domain, w, domain->task_distribution()));
}

TEST_CASE("the zero estimator flattens every state to zero") {
  const auto domain = make_domain(make_namo_scenario({}));
  Rng rng(derive_seed(25, "state"));
  CHECK(zero_estimator().name() == "zero");
  for (int i = 0; i < 3; ++i)
    CHECK(zero_estimator().estimate(*domain, domain->random_state(rng)) == 0.0);
}

TEST_CASE("estimators are built from their command-line spellings") {
  const auto domain = make_domain(make_namo_scenario({}));
  CHECK(make_estimator("zero", *domain)->name() == "zero");
  CHECK(make_estimator("oracle", *domain)->name() == "oracle");
  CHECK_THROWS_AS(make_estimator("", *domain), std::invalid_argument);
  CHECK_THROWS_AS(make_estimator("Zero", *domain), std::invalid_argument);
  CHECK_THROWS_AS(make_estimator("model", *domain), std::invalid_argument);
  CHECK_THROWS_AS(make_estimator("gnn:model.gnn", *domain), std::invalid_argument);
}
