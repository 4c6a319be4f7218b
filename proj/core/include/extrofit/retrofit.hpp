#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "extrofit/embedding_io.hpp"
#include "extrofit/lexicon.hpp"

namespace extrofit {

enum class BetaMode {
  InverseDegree,  // beta_ij = 1 / degree(i)
  Constant,       // beta_ij = RetrofitConfig::beta
};

struct RetrofitConfig {
  double alpha = 1.0;
  BetaMode beta_mode = BetaMode::InverseDegree;
  double beta = 1.0;
  std::size_t iterations = 10;
  // Stop early once the mean per-row L2 change of a sweep drops below this.
  std::optional<double> convergence_eps;
};

struct RetrofitReport {
  std::size_t sweeps_run = 0;
  std::vector<double> mean_change;  // one entry per sweep, averaged over all rows
};

// Sweeps the vocabulary in order, replacing each word that has neighbors with
//   (sum_j beta_ij * qhat_j + alpha * q_i) / (sum_j beta_ij + alpha)
// in place, so later words see earlier updates within the same sweep.
// Throws UnknownToken if the graph names a word outside the vocabulary,
// NonFiniteUpdate on overflow and InvalidConfig for iterations < 1, alpha <= 0
// or a non-positive constant beta.
EmbeddingMatrix retrofit(const EmbeddingMatrix& m, const SynonymGraph& graph,
                         const RetrofitConfig& config = {}, RetrofitReport* report = nullptr);

// sum_i [ alpha ||qhat_i - q_i||^2 + sum_{j in N(i)} beta_ij ||qhat_i - qhat_j||^2 ]
// Each edge is visited from both endpoints.
double retrofit_objective(const EmbeddingMatrix& m_hat, const EmbeddingMatrix& m,
                          const SynonymGraph& graph, const RetrofitConfig& config = {});

// The quadratic each in-place update minimises exactly over its own row:
//   sum_{i: deg(i) > 0} (alpha / beta_i) ||qhat_i - q_i||^2 + sum_{edges {i,j}} ||qhat_i - qhat_j||^2
// with beta_i the per-row beta. It never increases across sweeps, unlike
// retrofit_objective, whose double-counted edge term the update does not
// minimise.
double retrofit_sweep_energy(const EmbeddingMatrix& m_hat, const EmbeddingMatrix& m,
                             const SynonymGraph& graph, const RetrofitConfig& config = {});

}  // namespace extrofit
