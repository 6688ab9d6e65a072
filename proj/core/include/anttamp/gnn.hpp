#pragma once

#include <span>
#include <string>

#include <Eigen/Dense>

#include "anttamp/dataset.hpp"
#include "anttamp/estimators.hpp"

namespace anttamp {

/// One graph attention convolution: keys and values are shifted by a learned
/// projection of the edge features, queries attend over incoming edges, and
/// a root projection carries the node's own features through.
struct AttentionLayer {
  Eigen::MatrixXd Wq, Wk, Wv, Wr;  // d_in x hidden
  Eigen::MatrixXd We;              // edge_dim x hidden
  Eigen::VectorXd bq, bk, bv, br, be;
};

struct GnnModel {
  std::string domain;
  int node_dim = 0;
  int edge_dim = 0;
  int hidden = 0;
  std::vector<AttentionLayer> layers;
  Eigen::VectorXd head_w;  // 2*hidden: [mean-pool, sum-pool] readout
  double head_b = 0.0;

  // Feature and label statistics frozen at training time; prediction
  // z-scores inputs and de-normalizes its output with these.
  Eigen::VectorXd node_mu, node_sigma, edge_mu, edge_sigma;
  double label_mu = 0.0;
  double label_sigma = 1.0;
};

struct TrainParams {
  int epochs = 10;
  int batch_size = 8;
  double learning_rate = 0.05;
  int hidden = 64;
  int layer_count = 3;
  double val_fraction = 0.1;
  std::uint64_t seed = 1;
};

struct TrainReport {
  std::vector<double> train_mae;  // per epoch, label units
  std::vector<double> val_mae;
};

GnnModel train_model(const Dataset& data, const TrainParams& params,
                     TrainReport* report = nullptr);

/// Estimate for one encoded state, in label (cost) units.
double predict(const GnnModel& model, const SceneGraph& graph);

void save_model(const GnnModel& model, const std::string& path);
GnnModel load_model(const std::string& path);

struct EvalReport {
  double mae = 0.0;
  double spearman = 0.0;
  int count = 0;
};
EvalReport evaluate_model(const GnnModel& model, const Dataset& data);

/// Rank correlation with average ranks for ties; 1 = identical order.
double spearman_correlation(std::span<const double> a, std::span<const double> b);

/// Compares analytic parameter gradients against central finite differences
/// on a small random model and graph; returns the worst relative error.
double gnn_gradient_check(std::uint64_t seed);

class LearnedEstimator final : public CostEstimator {
 public:
  explicit LearnedEstimator(GnnModel model) : model_(std::move(model)) {}
  static LearnedEstimator from_file(const std::string& path) {
    return LearnedEstimator(load_model(path));
  }

  std::string_view name() const override { return "model"; }
  /// Throws ScenarioError when the state's encoding does not match the
  /// model's input schema (wrong domain or feature widths).
  double estimate(const Domain& domain, const WorldState& state) const override;

  const GnnModel& model() const { return model_; }

 private:
  GnnModel model_;
};

}  // namespace anttamp
