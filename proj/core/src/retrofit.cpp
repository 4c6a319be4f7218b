#include "extrofit/retrofit.hpp"

#include <cmath>
#include <string>

#include "extrofit/error.hpp"

namespace extrofit {

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency_by_row(const SynonymGraph& graph, const Vocabulary& vocab) {
  std::vector<std::size_t> row_of_node(graph.node_count());
  for (std::size_t n = 0; n < graph.node_count(); ++n) {
    const auto row = vocab.find(graph.nodes()[n]);
    if (!row) throw Error(ErrorCode::UnknownToken, graph.nodes()[n]);
    row_of_node[n] = *row;
  }
  Adjacency adj(vocab.size());
  for (std::size_t n = 0; n < graph.node_count(); ++n)
    for (auto nb : graph.adjacency(static_cast<SynonymGraph::NodeId>(n)))
      adj[row_of_node[n]].push_back(row_of_node[nb]);
  return adj;
}

void validate(const RetrofitConfig& config) {
  if (config.iterations < 1) throw Error(ErrorCode::InvalidConfig, "iterations must be >= 1");
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha))
    throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
  if (config.beta_mode == BetaMode::Constant && (!(config.beta > 0.0) || !std::isfinite(config.beta)))
    throw Error(ErrorCode::InvalidConfig, "beta must be positive");
}

double beta_of(const RetrofitConfig& config, std::size_t degree) {
  return config.beta_mode == BetaMode::InverseDegree ? 1.0 / static_cast<double>(degree)
                                                     : config.beta;
}

void check_shapes(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.dim() != b.dim() || !(a.vocab() == b.vocab()))
    throw Error(ErrorCode::ShapeMismatch, "matrices differ in vocabulary or dimension");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace

EmbeddingMatrix retrofit(const EmbeddingMatrix& m, const SynonymGraph& graph,
                         const RetrofitConfig& config, RetrofitReport* report) {
  validate(config);
  const Adjacency adj = adjacency_by_row(graph, m.vocab());
  const std::size_t d = m.dim();
  std::vector<double> hat = m.values();
  std::vector<double> next(d);

  RetrofitReport local;
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    double total_change = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const auto& nbrs = adj[i];
      if (nbrs.empty()) continue;
      const double beta = beta_of(config, nbrs.size());
      const auto orig = m.row(i);
      for (std::size_t k = 0; k < d; ++k) next[k] = config.alpha * orig[k];
      for (std::size_t j : nbrs) {
        const double* q = hat.data() + j * d;
        for (std::size_t k = 0; k < d; ++k) next[k] += beta * q[k];
      }
      const double norm = beta * static_cast<double>(nbrs.size()) + config.alpha;
      double* row = hat.data() + i * d;
      double change = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double v = next[k] / norm;
        if (!std::isfinite(v))
          throw Error(ErrorCode::NonFiniteUpdate, "row '" + m.vocab()[i] + "' sweep " +
                                                      std::to_string(sweep + 1));
        change += (v - row[k]) * (v - row[k]);
        row[k] = v;
      }
      total_change += std::sqrt(change);
    }
    ++local.sweeps_run;
    const double mean_change = total_change / static_cast<double>(m.rows());
    local.mean_change.push_back(mean_change);
    if (config.convergence_eps && mean_change < *config.convergence_eps) break;
  }
  if (report) *report = std::move(local);
  return EmbeddingMatrix(m.vocab_ptr(), std::move(hat), d);
}

double retrofit_objective(const EmbeddingMatrix& m_hat, const EmbeddingMatrix& m,
                          const SynonymGraph& graph, const RetrofitConfig& config) {
  check_shapes(m_hat, m);
  const Adjacency adj = adjacency_by_row(graph, m.vocab());
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    total += config.alpha * squared_distance(m_hat.row(i), m.row(i));
    if (adj[i].empty()) continue;
    const double beta = beta_of(config, adj[i].size());
    for (std::size_t j : adj[i]) total += beta * squared_distance(m_hat.row(i), m_hat.row(j));
  }
  return total;
}

double retrofit_sweep_energy(const EmbeddingMatrix& m_hat, const EmbeddingMatrix& m,
                             const SynonymGraph& graph, const RetrofitConfig& config) {
  check_shapes(m_hat, m);
  const Adjacency adj = adjacency_by_row(graph, m.vocab());
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (adj[i].empty()) continue;
    total += config.alpha / beta_of(config, adj[i].size()) *
             squared_distance(m_hat.row(i), m.row(i));
    for (std::size_t j : adj[i])
      if (j > i) total += squared_distance(m_hat.row(i), m_hat.row(j));
  }
  return total;
}

}  // namespace extrofit
