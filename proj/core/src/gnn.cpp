#include "anttamp/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "anttamp/scene_graph.hpp"

namespace anttamp {

namespace {

constexpr double kLeakySlope = 0.01;
constexpr double kAdaGradEps = 1e-10;
constexpr double kSigmaFloor = 1e-8;

// ---------------------------------------------------------------- prepared

// A graph with z-scored features and a per-node incoming-edge index; the
// form consumed by forward/backward.
struct Prepared {
  Eigen::MatrixXd X;  // n x node_dim
  Eigen::MatrixXd E;  // m x edge_dim
  std::vector<int> src, dst;
  std::vector<std::vector<int>> incoming;  // node -> edge indices
  double y = 0.0;                          // normalized label
};

Prepared prepare_graph(const SceneGraph& g, const GnnModel& m, double label) {
  Prepared p;
  const int n = g.node_count;
  const int dn = g.node_dim;
  const int de = g.edge_dim;
  p.X.resize(n, dn);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < dn; ++k)
      p.X(i, k) = (g.node_feature(i, k) - m.node_mu[k]) / m.node_sigma[k];
  const int me = static_cast<int>(g.edges.size());
  p.E.resize(me, de);
  p.src.resize(me);
  p.dst.resize(me);
  p.incoming.resize(n);
  for (int e = 0; e < me; ++e) {
    p.src[e] = g.edges[e].src;
    p.dst[e] = g.edges[e].dst;
    p.incoming[g.edges[e].dst].push_back(e);
    for (int k = 0; k < de; ++k)
      p.E(e, k) = (g.edge_feature(e, k) - m.edge_mu[k]) / m.edge_sigma[k];
  }
  p.y = (label - m.label_mu) / m.label_sigma;
  return p;
}

// ----------------------------------------------------------------- forward

struct LayerCache {
  Eigen::MatrixXd X;  // layer input
  Eigen::MatrixXd Q, K, V, Ehat;
  std::vector<double> alpha;  // attention weight per edge
  Eigen::MatrixXd Y;          // pre-activation
  Eigen::MatrixXd A;          // post-activation
};

void layer_forward(const AttentionLayer& L, const Prepared& p,
                   const Eigen::MatrixXd& X, LayerCache& c) {
  const int n = static_cast<int>(X.rows());
  const int h = static_cast<int>(L.Wq.cols());
  const double scale = 1.0 / std::sqrt(static_cast<double>(h));

  c.X = X;
  c.Q = (X * L.Wq).rowwise() + L.bq.transpose();
  c.K = (X * L.Wk).rowwise() + L.bk.transpose();
  c.V = (X * L.Wv).rowwise() + L.bv.transpose();
  c.Ehat = (p.E * L.We).rowwise() + L.be.transpose();
  c.Y = (X * L.Wr).rowwise() + L.br.transpose();
  c.alpha.assign(p.src.size(), 0.0);

  std::vector<double> scores;
  for (int i = 0; i < n; ++i) {
    const auto& in = p.incoming[i];
    if (in.empty()) continue;
    scores.resize(in.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < in.size(); ++k) {
      const int e = in[k];
      scores[k] = scale * c.Q.row(i).dot(c.K.row(p.src[e]) + c.Ehat.row(e));
      peak = std::max(peak, scores[k]);
    }
    double norm = 0.0;
    for (auto& s : scores) {
      s = std::exp(s - peak);
      norm += s;
    }
    for (std::size_t k = 0; k < in.size(); ++k) {
      const int e = in[k];
      const double a = scores[k] / norm;
      c.alpha[e] = a;
      c.Y.row(i) += a * (c.V.row(p.src[e]) + c.Ehat.row(e));
    }
  }

  c.A = c.Y.unaryExpr(
      [](double v) { return v > 0.0 ? v : kLeakySlope * v; });
}

// Network output (normalized units) with all intermediate caches retained.
double forward(const GnnModel& m, const Prepared& p, std::vector<LayerCache>& caches,
               Eigen::VectorXd& pooled) {
  caches.resize(m.layers.size());
  const Eigen::MatrixXd* X = &p.X;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    layer_forward(m.layers[l], p, *X, caches[l]);
    X = &caches[l].A;
  }
  const int h = m.hidden;
  pooled.resize(2 * h);
  pooled.head(h) = X->colwise().mean().transpose();
  pooled.tail(h) = X->colwise().sum().transpose();
  return m.head_w.dot(pooled) + m.head_b;
}

// ---------------------------------------------------------------- backward

struct LayerGrads {
  Eigen::MatrixXd Wq, Wk, Wv, Wr, We;
  Eigen::VectorXd bq, bk, bv, br, be;
};

struct ModelGrads {
  std::vector<LayerGrads> layers;
  Eigen::VectorXd head_w;
  double head_b = 0.0;
};

LayerGrads zeros_like(const AttentionLayer& L) {
  LayerGrads g;
  g.Wq = Eigen::MatrixXd::Zero(L.Wq.rows(), L.Wq.cols());
  g.Wk = Eigen::MatrixXd::Zero(L.Wk.rows(), L.Wk.cols());
  g.Wv = Eigen::MatrixXd::Zero(L.Wv.rows(), L.Wv.cols());
  g.Wr = Eigen::MatrixXd::Zero(L.Wr.rows(), L.Wr.cols());
  g.We = Eigen::MatrixXd::Zero(L.We.rows(), L.We.cols());
  g.bq = Eigen::VectorXd::Zero(L.bq.size());
  g.bk = Eigen::VectorXd::Zero(L.bk.size());
  g.bv = Eigen::VectorXd::Zero(L.bv.size());
  g.br = Eigen::VectorXd::Zero(L.br.size());
  g.be = Eigen::VectorXd::Zero(L.be.size());
  return g;
}

ModelGrads zeros_like(const GnnModel& m) {
  ModelGrads g;
  g.layers.reserve(m.layers.size());
  for (const auto& L : m.layers) g.layers.push_back(zeros_like(L));
  g.head_w = Eigen::VectorXd::Zero(m.head_w.size());
  g.head_b = 0.0;
  return g;
}

Eigen::MatrixXd layer_backward(const AttentionLayer& L, const Prepared& p,
                               const LayerCache& c, const Eigen::MatrixXd& dA,
                               LayerGrads& g) {
  const int n = static_cast<int>(c.X.rows());
  const int h = static_cast<int>(L.Wq.cols());
  const double scale = 1.0 / std::sqrt(static_cast<double>(h));

  const Eigen::MatrixXd dY =
      (dA.array() * c.Y.unaryExpr([](double v) {
                        return v > 0.0 ? 1.0 : kLeakySlope;
                      }).array())
          .matrix();

  g.Wr.noalias() += c.X.transpose() * dY;
  g.br += dY.colwise().sum().transpose();
  Eigen::MatrixXd dX = dY * L.Wr.transpose();

  Eigen::MatrixXd dQ = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd dK = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd dV = Eigen::MatrixXd::Zero(n, h);
  Eigen::MatrixXd dEhat = Eigen::MatrixXd::Zero(p.E.rows(), h);

  std::vector<double> dalpha;
  for (int i = 0; i < n; ++i) {
    const auto& in = p.incoming[i];
    if (in.empty()) continue;
    dalpha.resize(in.size());
    double mix = 0.0;  // sum_k alpha_k * dalpha_k (softmax jacobian term)
    for (std::size_t k = 0; k < in.size(); ++k) {
      const int e = in[k];
      dalpha[k] = dY.row(i).dot(c.V.row(p.src[e]) + c.Ehat.row(e));
      mix += c.alpha[e] * dalpha[k];
      dV.row(p.src[e]) += c.alpha[e] * dY.row(i);
      dEhat.row(e) += c.alpha[e] * dY.row(i);
    }
    for (std::size_t k = 0; k < in.size(); ++k) {
      const int e = in[k];
      const double ds = c.alpha[e] * (dalpha[k] - mix);
      dQ.row(i) += ds * scale * (c.K.row(p.src[e]) + c.Ehat.row(e));
      dK.row(p.src[e]) += ds * scale * c.Q.row(i);
      dEhat.row(e) += ds * scale * c.Q.row(i);
    }
  }

  g.Wq.noalias() += c.X.transpose() * dQ;
  g.bq += dQ.colwise().sum().transpose();
  dX.noalias() += dQ * L.Wq.transpose();
  g.Wk.noalias() += c.X.transpose() * dK;
  g.bk += dK.colwise().sum().transpose();
  dX.noalias() += dK * L.Wk.transpose();
  g.Wv.noalias() += c.X.transpose() * dV;
  g.bv += dV.colwise().sum().transpose();
  dX.noalias() += dV * L.Wv.transpose();
  g.We.noalias() += p.E.transpose() * dEhat;
  g.be += dEhat.colwise().sum().transpose();
  return dX;
}

// dpred: gradient of the loss w.r.t. the (normalized) network output.
void backward(const GnnModel& m, const Prepared& p, const std::vector<LayerCache>& caches,
              const Eigen::VectorXd& pooled, double dpred, ModelGrads& g) {
  g.head_w += dpred * pooled;
  g.head_b += dpred;

  const int h = m.hidden;
  const auto& top = caches.back().A;
  const int n = static_cast<int>(top.rows());
  const Eigen::VectorXd dpooled = dpred * m.head_w;
  Eigen::MatrixXd dA(n, h);
  const Eigen::RowVectorXd per_row =
      (dpooled.head(h) / static_cast<double>(n) + dpooled.tail(h)).transpose();
  for (int i = 0; i < n; ++i) dA.row(i) = per_row;

  for (int l = static_cast<int>(m.layers.size()) - 1; l >= 0; --l)
    dA = layer_backward(m.layers[l], p, caches[l], dA, g.layers[l]);
}

// ------------------------------------------------------------ optimization

struct AdaGrad {
  ModelGrads accum;
  double lr;

  AdaGrad(const GnnModel& m, double lr) : accum(zeros_like(m)), lr(lr) {}

  void apply_one(Eigen::MatrixXd& w, Eigen::MatrixXd& g, Eigen::MatrixXd& a) {
    a.array() += g.array().square();
    w.array() -= lr * g.array() / (a.array().sqrt() + kAdaGradEps);
    g.setZero();
  }
  void apply_one(Eigen::VectorXd& w, Eigen::VectorXd& g, Eigen::VectorXd& a) {
    a.array() += g.array().square();
    w.array() -= lr * g.array() / (a.array().sqrt() + kAdaGradEps);
    g.setZero();
  }
  void apply_one(double& w, double& g, double& a) {
    a += g * g;
    w -= lr * g / (std::sqrt(a) + kAdaGradEps);
    g = 0.0;
  }

  void step(GnnModel& m, ModelGrads& g) {
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      auto& L = m.layers[l];
      auto& G = g.layers[l];
      auto& A = accum.layers[l];
      apply_one(L.Wq, G.Wq, A.Wq);
      apply_one(L.Wk, G.Wk, A.Wk);
      apply_one(L.Wv, G.Wv, A.Wv);
      apply_one(L.Wr, G.Wr, A.Wr);
      apply_one(L.We, G.We, A.We);
      apply_one(L.bq, G.bq, A.bq);
      apply_one(L.bk, G.bk, A.bk);
      apply_one(L.bv, G.bv, A.bv);
      apply_one(L.br, G.br, A.br);
      apply_one(L.be, G.be, A.be);
    }
    apply_one(m.head_w, g.head_w, accum.head_w);
    apply_one(m.head_b, g.head_b, accum.head_b);
  }
};

// -------------------------------------------------------------------- init

Eigen::MatrixXd glorot(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)  // column-major fill, matches storage order
    for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(-limit, limit);
  return m;
}

AttentionLayer init_layer(int d_in, int edge_dim, int h, Rng& rng) {
  AttentionLayer L;
  L.Wq = glorot(d_in, h, rng);
  L.Wk = glorot(d_in, h, rng);
  L.Wv = glorot(d_in, h, rng);
  L.Wr = glorot(d_in, h, rng);
  L.We = glorot(edge_dim, h, rng);
  L.bq = Eigen::VectorXd::Zero(h);
  L.bk = Eigen::VectorXd::Zero(h);
  L.bv = Eigen::VectorXd::Zero(h);
  L.br = Eigen::VectorXd::Zero(h);
  L.be = Eigen::VectorXd::Zero(h);
  return L;
}

GnnModel init_model(const std::string& domain, int node_dim, int edge_dim,
                    const TrainParams& tp) {
  GnnModel m;
  m.domain = domain;
  m.node_dim = node_dim;
  m.edge_dim = edge_dim;
  m.hidden = tp.hidden;
  Rng rng(derive_seed(tp.seed, "init"));
  int d_in = node_dim;
  for (int l = 0; l < tp.layer_count; ++l) {
    m.layers.push_back(init_layer(d_in, edge_dim, tp.hidden, rng));
    d_in = tp.hidden;
  }
  m.head_w = glorot(2 * tp.hidden, 1, rng).col(0);
  m.head_b = 0.0;
  m.node_mu = Eigen::VectorXd::Zero(node_dim);
  m.node_sigma = Eigen::VectorXd::Ones(node_dim);
  m.edge_mu = Eigen::VectorXd::Zero(edge_dim);
  m.edge_sigma = Eigen::VectorXd::Ones(edge_dim);
  return m;
}

void fit_normalization(GnnModel& m, const Dataset& data,
                       std::span<const std::size_t> train_idx) {
  const int dn = m.node_dim, de = m.edge_dim;
  Eigen::VectorXd nsum = Eigen::VectorXd::Zero(dn), nsq = Eigen::VectorXd::Zero(dn);
  Eigen::VectorXd esum = Eigen::VectorXd::Zero(de), esq = Eigen::VectorXd::Zero(de);
  double lsum = 0.0, lsq = 0.0;
  std::int64_t n_nodes = 0, n_edges = 0;
  for (const auto si : train_idx) {
    const auto& g = data.samples[si].graph;
    for (int i = 0; i < g.node_count; ++i)
      for (int k = 0; k < dn; ++k) {
        const double v = g.node_feature(i, k);
        nsum[k] += v;
        nsq[k] += v * v;
      }
    n_nodes += g.node_count;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      for (int k = 0; k < de; ++k) {
        const double v = g.edge_feature(e, k);
        esum[k] += v;
        esq[k] += v * v;
      }
    n_edges += static_cast<std::int64_t>(g.edges.size());
    lsum += data.samples[si].label;
    lsq += data.samples[si].label * data.samples[si].label;
  }
  auto finish = [](Eigen::VectorXd& mu, Eigen::VectorXd& sigma,
                   const Eigen::VectorXd& sum, const Eigen::VectorXd& sq, double count) {
    mu = sum / count;
    sigma = ((sq / count).array() - mu.array().square())
                .max(0.0)
                .sqrt()
                .max(kSigmaFloor)
                .matrix();
  };
  if (n_nodes > 0) finish(m.node_mu, m.node_sigma, nsum, nsq, static_cast<double>(n_nodes));
  if (n_edges > 0) finish(m.edge_mu, m.edge_sigma, esum, esq, static_cast<double>(n_edges));
  const double cnt = static_cast<double>(train_idx.size());
  m.label_mu = lsum / cnt;
  m.label_sigma =
      std::max(std::sqrt(std::max(lsq / cnt - m.label_mu * m.label_mu, 0.0)), kSigmaFloor);
}

void check_graph_schema(const GnnModel& m, const SceneGraph& g) {
  if (g.node_dim != m.node_dim || g.edge_dim != m.edge_dim)
    throw ScenarioError("graph features do not match the model's input schema");
}

// -------------------------------------------------------------------- io

constexpr char kModelMagic[8] = {'A', 'P', 'G', 'N', 'N', '0', '0', '1'};

void write_raw(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}
void read_raw(std::ifstream& in, void* p, std::size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) throw ScenarioError("model file is truncated");
}
void write_mat(std::ofstream& out, const Eigen::MatrixXd& m) {
  write_raw(out, m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
}
void write_vec(std::ofstream& out, const Eigen::VectorXd& v) {
  write_raw(out, v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
}
void read_mat(std::ifstream& in, Eigen::MatrixXd& m, int rows, int cols) {
  m.resize(rows, cols);
  read_raw(in, m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
}
void read_vec(std::ifstream& in, Eigen::VectorXd& v, int size) {
  v.resize(size);
  read_raw(in, v.data(), static_cast<std::size_t>(v.size()) * sizeof(double));
}

}  // namespace

// ------------------------------------------------------------------- train

GnnModel train_model(const Dataset& data, const TrainParams& tp, TrainReport* report) {
  if (data.samples.empty()) throw std::invalid_argument("training data is empty");
  if (tp.batch_size < 1 || tp.hidden < 1 || tp.layer_count < 1 || tp.epochs < 0)
    throw std::invalid_argument("bad training parameters");

  const std::size_t n = data.samples.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng split_rng(derive_seed(tp.seed, "split"));
  split_rng.shuffle(idx);
  std::size_t val_count = static_cast<std::size_t>(
      std::llround(tp.val_fraction * static_cast<double>(n)));
  if (val_count >= n) val_count = n - 1;
  const std::size_t train_count = n - val_count;
  std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + train_count);
  std::vector<std::size_t> val_idx(idx.begin() + train_count, idx.end());

  GnnModel model = init_model(data.domain, data.node_dim, data.edge_dim, tp);
  fit_normalization(model, data, train_idx);

  std::vector<Prepared> prep(n);
  for (std::size_t i = 0; i < n; ++i)
    prep[i] = prepare_graph(data.samples[i].graph, model, data.samples[i].label);

  ModelGrads grads = zeros_like(model);
  AdaGrad opt(model, tp.learning_rate);
  std::vector<LayerCache> caches;
  Eigen::VectorXd pooled;

  auto subset_mae = [&](std::span<const std::size_t> subset) {
    if (subset.empty()) return 0.0;
    double total = 0.0;
    for (const auto i : subset) {
      const double pred = forward(model, prep[i], caches, pooled);
      total += std::abs(pred - prep[i].y);
    }
    return total / static_cast<double>(subset.size()) * model.label_sigma;
  };

  for (int epoch = 0; epoch < tp.epochs; ++epoch) {
    std::vector<std::size_t> order = train_idx;
    Rng epoch_rng(derive_seed(tp.seed, "epoch", static_cast<std::uint64_t>(epoch)));
    epoch_rng.shuffle(order);

    double abs_err = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(tp.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(tp.batch_size));
      const double batch_n = static_cast<double>(stop - start);
      for (std::size_t k = start; k < stop; ++k) {
        const auto& p = prep[order[k]];
        const double pred = forward(model, p, caches, pooled);
        const double err = pred - p.y;
        abs_err += std::abs(err);
        const double sign = err > 0.0 ? 1.0 : (err < 0.0 ? -1.0 : 0.0);
        backward(model, p, caches, pooled, sign / batch_n, grads);
      }
      opt.step(model, grads);
    }

    if (report) {
      report->train_mae.push_back(abs_err / static_cast<double>(order.size()) *
                                  model.label_sigma);
      report->val_mae.push_back(val_idx.empty()
                                    ? report->train_mae.back()
                                    : subset_mae(val_idx));
    }
  }
  return model;
}

double predict(const GnnModel& model, const SceneGraph& graph) {
  check_graph_schema(model, graph);
  const Prepared p = prepare_graph(graph, model, 0.0);
  std::vector<LayerCache> caches;
  Eigen::VectorXd pooled;
  const double pred = forward(model, p, caches, pooled);
  return pred * model.label_sigma + model.label_mu;
}

EvalReport evaluate_model(const GnnModel& model, const Dataset& data) {
  EvalReport r;
  r.count = static_cast<int>(data.samples.size());
  if (data.samples.empty()) return r;
  std::vector<double> preds, labels;
  preds.reserve(data.samples.size());
  labels.reserve(data.samples.size());
  double total = 0.0;
  for (const auto& s : data.samples) {
    const double pred = predict(model, s.graph);
    preds.push_back(pred);
    labels.push_back(s.label);
    total += std::abs(pred - s.label);
  }
  r.mae = total / static_cast<double>(data.samples.size());
  r.spearman = spearman_correlation(preds, labels);
  return r;
}

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("rank correlation needs two equal-length series");
  const std::size_t n = a.size();

  auto ranks = [n](std::span<const double> v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // ties share ranks
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const auto ra = ranks(a);
  const auto rb = ranks(b);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

// --------------------------------------------------------- gradient check

double gnn_gradient_check(std::uint64_t seed) {
  TrainParams tp;
  tp.hidden = 6;
  tp.layer_count = 2;
  tp.seed = seed;
  const int node_dim = 5, edge_dim = 2, n_nodes = 4;
  GnnModel model = init_model("check", node_dim, edge_dim, tp);

  Rng rng(derive_seed(seed, "check-graph"));
  SceneGraph g;
  g.node_count = n_nodes;
  g.node_dim = node_dim;
  g.edge_dim = edge_dim;
  for (int i = 0; i < n_nodes * node_dim; ++i)
    g.node_features.push_back(rng.uniform(-1.0, 1.0));
  for (int i = 0; i < n_nodes; ++i)
    for (int j = 0; j < n_nodes; ++j) {
      if (i == j) continue;
      g.edges.push_back({i, j});
      for (int k = 0; k < edge_dim; ++k)
        g.edge_features.push_back(rng.uniform(-1.0, 1.0));
    }

  const Prepared p = prepare_graph(g, model, 0.0);
  std::vector<LayerCache> caches;
  Eigen::VectorXd pooled;
  forward(model, p, caches, pooled);
  ModelGrads grads = zeros_like(model);
  backward(model, p, caches, pooled, 1.0, grads);

  // Walk every parameter alongside its analytic gradient.
  std::vector<std::pair<double*, double*>> params;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    auto& L = model.layers[l];
    auto& G = grads.layers[l];
    auto add_m = [&](Eigen::MatrixXd& w, Eigen::MatrixXd& g2) {
      for (Eigen::Index i = 0; i < w.size(); ++i)
        params.emplace_back(w.data() + i, g2.data() + i);
    };
    auto add_v = [&](Eigen::VectorXd& w, Eigen::VectorXd& g2) {
      for (Eigen::Index i = 0; i < w.size(); ++i)
        params.emplace_back(w.data() + i, g2.data() + i);
    };
    add_m(L.Wq, G.Wq);
    add_m(L.Wk, G.Wk);
    add_m(L.Wv, G.Wv);
    add_m(L.Wr, G.Wr);
    add_m(L.We, G.We);
    add_v(L.bq, G.bq);
    add_v(L.bk, G.bk);
    add_v(L.bv, G.bv);
    add_v(L.br, G.br);
    add_v(L.be, G.be);
  }
  for (Eigen::Index i = 0; i < model.head_w.size(); ++i)
    params.emplace_back(model.head_w.data() + i, grads.head_w.data() + i);
  params.emplace_back(&model.head_b, &grads.head_b);

  const double h = 1e-5;
  double worst = 0.0;
  std::vector<LayerCache> scratch;
  Eigen::VectorXd scratch_pool;
  for (auto& [w, analytic] : params) {
    const double saved = *w;
    *w = saved + h;
    const double up = forward(model, p, scratch, scratch_pool);
    *w = saved - h;
    const double down = forward(model, p, scratch, scratch_pool);
    *w = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double rel =
        std::abs(*analytic - numeric) /
        std::max(1e-6, std::abs(*analytic) + std::abs(numeric));
    worst = std::max(worst, rel);
  }
  return worst;
}

// --------------------------------------------------------------------- io

void save_model(const GnnModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write model file: " + path);
  nlohmann::json header{{"schema_version", 1},
                        {"domain", m.domain},
                        {"node_dim", m.node_dim},
                        {"edge_dim", m.edge_dim},
                        {"hidden", m.hidden},
                        {"layers", m.layers.size()}};
  const std::string htext = header.dump();
  write_raw(out, kModelMagic, sizeof(kModelMagic));
  const auto hlen = static_cast<std::uint32_t>(htext.size());
  write_raw(out, &hlen, sizeof(hlen));
  write_raw(out, htext.data(), htext.size());

  write_vec(out, m.node_mu);
  write_vec(out, m.node_sigma);
  write_vec(out, m.edge_mu);
  write_vec(out, m.edge_sigma);
  write_raw(out, &m.label_mu, sizeof(double));
  write_raw(out, &m.label_sigma, sizeof(double));
  for (const auto& L : m.layers) {
    write_mat(out, L.Wq);
    write_mat(out, L.Wk);
    write_mat(out, L.Wv);
    write_mat(out, L.Wr);
    write_mat(out, L.We);
    write_vec(out, L.bq);
    write_vec(out, L.bk);
    write_vec(out, L.bv);
    write_vec(out, L.br);
    write_vec(out, L.be);
  }
  write_vec(out, m.head_w);
  write_raw(out, &m.head_b, sizeof(double));
  if (!out) throw ScenarioError("failed writing model file: " + path);
}

GnnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open model file: " + path);
  char magic[8];
  read_raw(in, magic, sizeof(magic));
  if (std::memcmp(magic, kModelMagic, sizeof(kModelMagic)) != 0)
    throw ScenarioError("not a model file: " + path);
  std::uint32_t hlen = 0;
  read_raw(in, &hlen, sizeof(hlen));
  if (hlen > (1u << 20)) throw ScenarioError("model header is implausibly large");
  std::string htext(hlen, '\0');
  read_raw(in, htext.data(), hlen);

  GnnModel m;
  std::size_t layer_count = 0;
  try {
    const auto header = nlohmann::json::parse(htext);
    if (header.at("schema_version").get<int>() != 1)
      throw ScenarioError("unsupported model schema version");
    m.domain = header.at("domain").get<std::string>();
    m.node_dim = header.at("node_dim").get<int>();
    m.edge_dim = header.at("edge_dim").get<int>();
    m.hidden = header.at("hidden").get<int>();
    layer_count = header.at("layers").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("bad model header: ") + e.what());
  }
  if (m.node_dim < 1 || m.edge_dim < 1 || m.hidden < 1 || layer_count < 1 ||
      layer_count > 64)
    throw ScenarioError("bad model header: implausible dimensions");

  read_vec(in, m.node_mu, m.node_dim);
  read_vec(in, m.node_sigma, m.node_dim);
  read_vec(in, m.edge_mu, m.edge_dim);
  read_vec(in, m.edge_sigma, m.edge_dim);
  read_raw(in, &m.label_mu, sizeof(double));
  read_raw(in, &m.label_sigma, sizeof(double));
  int d_in = m.node_dim;
  for (std::size_t l = 0; l < layer_count; ++l) {
    AttentionLayer L;
    read_mat(in, L.Wq, d_in, m.hidden);
    read_mat(in, L.Wk, d_in, m.hidden);
    read_mat(in, L.Wv, d_in, m.hidden);
    read_mat(in, L.Wr, d_in, m.hidden);
    read_mat(in, L.We, m.edge_dim, m.hidden);
    read_vec(in, L.bq, m.hidden);
    read_vec(in, L.bk, m.hidden);
    read_vec(in, L.bv, m.hidden);
    read_vec(in, L.br, m.hidden);
    read_vec(in, L.be, m.hidden);
    m.layers.push_back(std::move(L));
    d_in = m.hidden;
  }
  read_vec(in, m.head_w, 2 * m.hidden);
  read_raw(in, &m.head_b, sizeof(double));
  return m;
}

double LearnedEstimator::estimate(const Domain& domain, const WorldState& state) const {
  if (model_.domain != domain.name())
    throw ScenarioError("model was trained for domain '" + model_.domain +
                        "', not '" + std::string(domain.name()) + "'");
  return predict(model_, encode_state(domain, state));
}

}  // namespace anttamp
