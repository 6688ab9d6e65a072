#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "anttamp/cabinet.hpp"
#include "anttamp/estimators.hpp"
#include "anttamp/gnn.hpp"
#include "anttamp/namo.hpp"

using namespace anttamp;

namespace {

std::unique_ptr<Domain> small_floor() {
  NamoScenarioParams p;
  p.object_count = 3;
  return make_domain(make_namo_scenario(p));
}

// Cached across cases: labeling and training are cheap but not free.
const Dataset& train_data() {
  static const Dataset d = [] {
    DatasetGenParams g;
    g.count = 160;
    g.seed = 5;
    g.oracle.samples_per_task = 3;
    return generate_dataset(*small_floor(), g);
  }();
  return d;
}

TrainParams small_params() {
  TrainParams tp;
  tp.epochs = 6;
  tp.hidden = 24;
  tp.seed = 2;
  return tp;
}

const GnnModel& trained() {
  static const GnnModel m = train_model(train_data(), small_params());
  return m;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("analytic gradients agree with central finite differences") {
  CHECK(gnn_gradient_check(1) < 1e-4);
  CHECK(gnn_gradient_check(2) < 1e-4);
}

TEST_CASE("training drives the fit error down and is repeatable") {
  TrainReport report;
  const GnnModel retrained = train_model(train_data(), small_params(), &report);

  REQUIRE(report.train_mae.size() == 6);
  REQUIRE(report.val_mae.size() == 6);
  CHECK(report.train_mae.front() > report.train_mae.back());
  for (const double mae : report.train_mae) CHECK(std::isfinite(mae));

  // Same data and seed: bit-identical predictions, report or not.
  for (int i = 0; i < 5; ++i) {
    const auto& g = train_data().samples[static_cast<std::size_t>(i) * 30].graph;
    CHECK(predict(retrained, g) == predict(trained(), g));
  }
}

TEST_CASE("models survive the file round trip exactly") {
  const std::string path = temp_path("anttamp_test_roundtrip.gnn");
  save_model(trained(), path);
  const GnnModel back = load_model(path);
  std::remove(path.c_str());

  CHECK(back.domain == trained().domain);
  CHECK(back.node_dim == trained().node_dim);
  CHECK(back.edge_dim == trained().edge_dim);
  CHECK(back.hidden == trained().hidden);
  REQUIRE(back.layers.size() == trained().layers.size());
  CHECK(back.label_mu == trained().label_mu);
  CHECK(back.label_sigma == trained().label_sigma);
  CHECK(back.head_b == trained().head_b);
  CHECK((back.layers[0].Wq.array() == trained().layers[0].Wq.array()).all());
  CHECK((back.node_mu.array() == trained().node_mu.array()).all());

  for (int i = 0; i < 8; ++i) {
    const auto& g = train_data().samples[static_cast<std::size_t>(i) * 17].graph;
    CHECK(predict(back, g) == predict(trained(), g));
  }
}

TEST_CASE("evaluation is plain prediction error plus rank correlation") {
  DatasetGenParams g;
  g.count = 40;
  g.seed = 77;
  g.oracle.samples_per_task = 3;
  const Dataset held_out = generate_dataset(*small_floor(), g);

  const EvalReport r = evaluate_model(trained(), held_out);
  REQUIRE(r.count == 40);

  std::vector<double> preds, labels;
  double total = 0.0;
  for (const auto& s : held_out.samples) {
    preds.push_back(predict(trained(), s.graph));
    labels.push_back(s.label);
    total += std::abs(preds.back() - s.label);
  }
  CHECK(r.mae == doctest::Approx(total / 40.0).epsilon(1e-12));
  CHECK(r.spearman == spearman_correlation(preds, labels));
}

TEST_CASE("rank correlation handles ties, reversals, and degeneracy") {
  const std::vector<double> up{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> scaled{10.0, 20.0, 30.0, 40.0};
  const std::vector<double> down{40.0, 30.0, 20.0, 10.0};
  CHECK(spearman_correlation(up, scaled) == 1.0);
  CHECK(spearman_correlation(up, down) == -1.0);

  const std::vector<double> tied{1.0, 2.0, 2.0, 3.0};
  CHECK(spearman_correlation(tied, up) ==
        doctest::Approx(0.9486832980505139).epsilon(1e-12));
  const std::vector<double> a{3.0, 1.0, 4.0, 1.0, 5.0};
  const std::vector<double> b{2.0, 7.0, 1.0, 8.0, 2.0};
  CHECK(spearman_correlation(a, b) ==
        doctest::Approx(-0.7894736842105264).epsilon(1e-12));

  const std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
  CHECK(spearman_correlation(flat, up) == 0.0);

  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(spearman_correlation(one, one), std::invalid_argument);
  const std::vector<double> three{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(spearman_correlation(up, three), std::invalid_argument);
}

TEST_CASE("the learned estimator guards its input schema") {
  const LearnedEstimator est(trained());
  CHECK(est.name() == "model");

  const auto domain = small_floor();
  Rng rng(derive_seed(31, "state"));
  const WorldState w = domain->random_state(rng);
  CHECK(est.estimate(*domain, w) == predict(trained(), encode_state(*domain, w)));

  CabinetScenarioParams cp;
  cp.per_class = 1;
  const auto other = make_domain(make_cabinet_scenario(cp));
  CHECK_THROWS_AS(est.estimate(*other, other->scenario().initial_state()),
                  ScenarioError);

  SceneGraph wrong;
  wrong.node_count = 1;
  wrong.node_dim = trained().node_dim + 1;
  wrong.edge_dim = trained().edge_dim;
  wrong.node_features.assign(static_cast<std::size_t>(wrong.node_dim), 0.0);
  CHECK_THROWS_AS(predict(trained(), wrong), ScenarioError);
}

TEST_CASE("model files plug into the estimator factory") {
  const std::string path = temp_path("anttamp_test_factory.gnn");
  save_model(trained(), path);
  const auto domain = small_floor();
  const auto est = make_estimator("model:" + path, *domain);
  std::remove(path.c_str());

  CHECK(est->name() == "model");
  Rng rng(derive_seed(32, "state"));
  const WorldState w = domain->random_state(rng);
  CHECK(est->estimate(*domain, w) == predict(trained(), encode_state(*domain, w)));
}
