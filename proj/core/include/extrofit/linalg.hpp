#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>

#include "extrofit/embedding_io.hpp"

namespace extrofit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// How class means are weighted in the between-class scatter. ClassSize gives
// S_B = sum_c N_c (mu_c - mu)(mu_c - mu)^T, so that S_B + S_W is the total
// scatter; Unweighted drops the N_c factor.
enum class Weighting { ClassSize, Unweighted };

struct ScatterPair {
  Matrix between;  // S_B, F x F
  Matrix within;   // S_W, F x F
  Vector grand_mean;
  std::size_t n_samples = 0;
  std::size_t n_classes = 0;
  Weighting weighting = Weighting::ClassSize;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(within.rows()); }
};

// Accumulates S_B and S_W in double precision over the rows of `data`.
// Rows are visited in order in fixed-size blocks, so the result is
// reproducible. Singleton classes contribute nothing to S_W and are never
// copied; only means of classes with two or more members are stored.
//
// Throws LabelOutOfRange, ShapeMismatch (labels.size() != rows) and
// DegenerateInput (fewer than 2 rows or classes).
ScatterPair accumulate_scatter(const Eigen::Ref<const RowMatrix>& data,
                               std::span<const std::uint32_t> labels, std::size_t n_classes,
                               Weighting weighting = Weighting::ClassSize);

struct LdaModel {
  Matrix transform;    // U, in_dim x out_dim; columns are generalized eigenvectors
  Vector eigenvalues;  // descending, non-negative
  double shrinkage = 0.0;
  double ridge = 0.0;  // extra diagonal load needed for Cholesky, 0 if none
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
};

// (1 - shrinkage) * S_W + shrinkage * (trace(S_W) / F) * I
Matrix shrunk_within(const ScatterPair& scatter, double shrinkage);

// The within-class metric the model was actually solved against: the shrunk
// S_W plus the ridge recorded in the model.
Matrix effective_within(const ScatterPair& scatter, const LdaModel& model);

// Solves S_B u = e S_W' u for the top `out_dim` eigenpairs by Cholesky
// whitening (S_W' = L L^T, eigensolve L^-1 S_B L^-T, back-substitute).
// Columns are scaled to u^T S_W' u = 1 and signed so their largest-magnitude
// entry is positive.
//
// If S_W' is not positive definite a ridge is added, growing by decades from
// 1e-8 * trace/F; past 1e-2 * trace/F the fit throws RankDeficient.
// Throws BadDimension unless 1 <= out_dim <= min(F, n_classes - 1) and
// 0 <= shrinkage <= 1.
LdaModel lda_fit(const ScatterPair& scatter, std::size_t out_dim, double shrinkage);

// data * U. Throws BadDimension on a column-count mismatch.
RowMatrix lda_transform(const LdaModel& model, const Eigen::Ref<const RowMatrix>& data);

// det(U^T S_B U) / det(U^T S_W' U), with S_W' shrunk as in lda_fit.
// Throws SingularDenominator when the denominator is not positive.
double fisher_objective(const ScatterPair& scatter, const Eigen::Ref<const Matrix>& directions,
                        double shrinkage);

}  // namespace extrofit
