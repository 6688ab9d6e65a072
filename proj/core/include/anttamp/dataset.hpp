#pragma once

#include <string>
#include <vector>

#include "anttamp/oracle.hpp"
#include "anttamp/scene_graph.hpp"

namespace anttamp {

/// One training example: an encoded state and its expected-future-cost label,
/// plus the seeds that produced both (for reproducing any record exactly).
struct GraphSample {
  SceneGraph graph;
  double label = 0.0;
  std::uint64_t state_seed = 0;
  std::uint64_t label_seed = 0;
};

struct Dataset {
  std::string domain;
  int node_dim = 0;
  int edge_dim = 0;
  std::vector<GraphSample> samples;
};

struct DatasetGenParams {
  int count = 10000;
  std::uint64_t seed = 1;
  OracleParams oracle{};
};

/// count random states of the domain, each labeled with oracle_vap. States
/// whose labeling fails (solver gives up) are resampled; records are
/// generated concurrently and are identical for any worker-pool size.
Dataset generate_dataset(const Domain& domain, const DatasetGenParams& params);

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace anttamp
