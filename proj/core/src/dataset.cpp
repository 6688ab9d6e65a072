#include "anttamp/dataset.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "anttamp/parallel.hpp"

namespace anttamp {

namespace {

constexpr char kMagic[8] = {'A', 'P', 'D', 'S', 'E', 'T', '0', '1'};

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& out, T v) {
  write_bytes(out, &v, sizeof(v));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw ScenarioError("dataset file is truncated");
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v;
  read_bytes(in, &v, sizeof(v));
  return v;
}

}  // namespace

Dataset generate_dataset(const Domain& domain, const DatasetGenParams& params) {
  if (params.count < 1) throw std::invalid_argument("dataset count must be positive");
  Dataset ds;
  ds.domain = std::string(domain.name());
  const auto layout = domain.graph_layout();
  ds.node_dim = layout.kind_count + 3;
  ds.edge_dim = 2;
  ds.samples.resize(static_cast<std::size_t>(params.count));

  const TaskDistribution tasks = domain.task_distribution();
  constexpr int kRetries = 16;

  parallel_for(ds.samples.size(), [&](std::size_t i) {
    for (int r = 0;; ++r) {
      const std::uint64_t state_seed =
          derive_seed(params.seed, "state", i * kRetries + r);
      const std::uint64_t label_seed =
          derive_seed(params.seed, "label", i * kRetries + r);
      Rng rng(state_seed);
      const WorldState state = domain.random_state(rng);
      OracleParams oracle = params.oracle;
      oracle.seed_salt = label_seed;
      try {
        const double label = oracle_vap(domain, state, tasks, oracle);
        ds.samples[i] = {encode_state(domain, state), label, state_seed, label_seed};
        return;
      } catch (const SolverError&) {
        if (r + 1 >= kRetries) throw;
      }
    }
  });
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write dataset file: " + path);

  nlohmann::json header{{"schema_version", 1},
                        {"domain", ds.domain},
                        {"node_dim", ds.node_dim},
                        {"edge_dim", ds.edge_dim},
                        {"count", ds.samples.size()}};
  const std::string htext = header.dump();
  write_bytes(out, kMagic, sizeof(kMagic));
  write_pod(out, static_cast<std::uint32_t>(htext.size()));
  write_bytes(out, htext.data(), htext.size());

  for (const auto& s : ds.samples) {
    write_pod(out, static_cast<std::uint32_t>(s.graph.node_count));
    write_pod(out, static_cast<std::uint32_t>(s.graph.edges.size()));
    write_bytes(out, s.graph.node_features.data(),
                s.graph.node_features.size() * sizeof(double));
    for (const auto& e : s.graph.edges) {
      write_pod(out, static_cast<std::uint32_t>(e.src));
      write_pod(out, static_cast<std::uint32_t>(e.dst));
    }
    write_bytes(out, s.graph.edge_features.data(),
                s.graph.edge_features.size() * sizeof(double));
    write_pod(out, s.label);
    write_pod(out, s.state_seed);
    write_pod(out, s.label_seed);
  }
  if (!out) throw ScenarioError("failed writing dataset file: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open dataset file: " + path);

  char magic[8];
  read_bytes(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ScenarioError("not a dataset file: " + path);
  const auto hlen = read_pod<std::uint32_t>(in);
  if (hlen > (1u << 20)) throw ScenarioError("dataset header is implausibly large");
  std::string htext(hlen, '\0');
  read_bytes(in, htext.data(), hlen);

  Dataset ds;
  std::size_t count = 0;
  try {
    const auto header = nlohmann::json::parse(htext);
    if (header.at("schema_version").get<int>() != 1)
      throw ScenarioError("unsupported dataset schema version");
    ds.domain = header.at("domain").get<std::string>();
    ds.node_dim = header.at("node_dim").get<int>();
    ds.edge_dim = header.at("edge_dim").get<int>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("bad dataset header: ") + e.what());
  }
  if (ds.node_dim < 1 || ds.edge_dim < 1)
    throw ScenarioError("bad dataset header: non-positive feature widths");

  ds.samples.resize(count);
  for (auto& s : ds.samples) {
    const auto n_nodes = read_pod<std::uint32_t>(in);
    const auto n_edges = read_pod<std::uint32_t>(in);
    if (n_nodes > 4096 || n_edges > 4096 * 4096)
      throw ScenarioError("dataset record is implausibly large");
    s.graph.node_count = static_cast<int>(n_nodes);
    s.graph.node_dim = ds.node_dim;
    s.graph.edge_dim = ds.edge_dim;
    s.graph.node_features.resize(static_cast<std::size_t>(n_nodes) * ds.node_dim);
    read_bytes(in, s.graph.node_features.data(),
               s.graph.node_features.size() * sizeof(double));
    s.graph.edges.resize(n_edges);
    for (auto& e : s.graph.edges) {
      e.src = static_cast<int>(read_pod<std::uint32_t>(in));
      e.dst = static_cast<int>(read_pod<std::uint32_t>(in));
      if (e.src >= s.graph.node_count || e.dst >= s.graph.node_count)
        throw ScenarioError("dataset edge references a missing node");
    }
    s.graph.edge_features.resize(static_cast<std::size_t>(n_edges) * ds.edge_dim);
    read_bytes(in, s.graph.edge_features.data(),
               s.graph.edge_features.size() * sizeof(double));
    s.label = read_pod<double>(in);
    s.state_seed = read_pod<std::uint64_t>(in);
    s.label_seed = read_pod<std::uint64_t>(in);
  }
  return ds;
}

}  // namespace anttamp
