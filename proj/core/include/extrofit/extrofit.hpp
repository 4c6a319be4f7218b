#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "extrofit/embedding_io.hpp"
#include "extrofit/lexicon.hpp"
#include "extrofit/linalg.hpp"

namespace extrofit {

struct ExtrofitConfig {
  std::size_t n_expand = 1;
  // Defaults to the input dimension, so the projection drops the expansion.
  std::optional<std::size_t> out_dim;
  double shrinkage = 1e-4;
  Weighting weighting = Weighting::ClassSize;
};

// Mean of the components.
double representative(std::span<const double> vec);

// Appends k columns to every row, each holding the row's representative value.
EmbeddingMatrix expand(const EmbeddingMatrix& m, std::size_t k);

// Overwrites the last k columns of every row with the mean of those columns
// over the row's synonym class. Singletons are untouched, as are the leading
// columns. Throws PartitionMismatch if `classes` covers a different vocabulary.
EmbeddingMatrix transfer(const EmbeddingMatrix& expanded, const SynonymClasses& classes,
                         std::size_t k);

struct ExtrofitResult {
  EmbeddingMatrix vectors;
  LdaModel model;
};

// expand -> transfer -> class-labelled LDA fit over all rows -> projection.
// Throws DegenerateLexicon when the classes carry no synonymy (fewer than two
// classes, or no class with two members) and BadDimension for an invalid
// config; linalg errors propagate.
ExtrofitResult extrofit(const EmbeddingMatrix& m, const SynonymClasses& classes,
                        const ExtrofitConfig& config = {});

}  // namespace extrofit
