#include "extrofit/extrofit.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "extrofit/error.hpp"

namespace extrofit {

namespace {

std::vector<double> expanded_values(const EmbeddingMatrix& m, std::size_t k) {
  const std::size_t d = m.dim();
  const std::size_t width = d + k;
  std::vector<double> out(m.rows() * width);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto src = m.row(i);
    double* dst = out.data() + i * width;
    std::copy(src.begin(), src.end(), dst);
    std::fill(dst + d, dst + width, representative(src));
  }
  return out;
}

void check_same_vocabulary(const EmbeddingMatrix& m, const SynonymClasses& classes) {
  if (m.vocab_ptr() == classes.vocab_ptr()) return;
  if (!(m.vocab() == classes.vocab()))
    throw Error(ErrorCode::PartitionMismatch, "synonym classes cover a different vocabulary");
}

void transfer_in_place(std::vector<double>& values, std::size_t width, std::size_t k,
                       const SynonymClasses& classes) {
  const std::size_t first = width - k;
  for (std::size_t c = 0; c < classes.n_classes(); ++c) {
    const auto& members = classes.members(static_cast<SynonymClasses::ClassId>(c));
    if (members.size() < 2) continue;
    for (std::size_t col = first; col < width; ++col) {
      double sum = 0.0;
      for (std::size_t row : members) sum += values[row * width + col];
      const double mean = sum / static_cast<double>(members.size());
      for (std::size_t row : members) values[row * width + col] = mean;
    }
  }
}

}  // namespace

double representative(std::span<const double> vec) {
  if (vec.empty()) throw Error(ErrorCode::BadDimension, "representative of an empty vector");
  return std::accumulate(vec.begin(), vec.end(), 0.0) / static_cast<double>(vec.size());
}

EmbeddingMatrix expand(const EmbeddingMatrix& m, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::BadDimension, "expansion count must be >= 1");
  return EmbeddingMatrix(m.vocab_ptr(), expanded_values(m, k), m.dim() + k);
}

EmbeddingMatrix transfer(const EmbeddingMatrix& expanded, const SynonymClasses& classes,
                         std::size_t k) {
  if (k < 1 || k >= expanded.dim())
    throw Error(ErrorCode::BadDimension, "expanded column count must be in [1, dim)");
  check_same_vocabulary(expanded, classes);
  std::vector<double> values = expanded.values();
  transfer_in_place(values, expanded.dim(), k, classes);
  return EmbeddingMatrix(expanded.vocab_ptr(), std::move(values), expanded.dim());
}

ExtrofitResult extrofit(const EmbeddingMatrix& m, const SynonymClasses& classes,
                        const ExtrofitConfig& config) {
  check_same_vocabulary(m, classes);
  if (classes.n_classes() < 2 || classes.n_nonsingleton_classes() == 0)
    throw Error(ErrorCode::DegenerateLexicon,
                "no synonym class has two or more in-vocabulary members");
  if (config.n_expand < 1) throw Error(ErrorCode::BadDimension, "n_expand must be >= 1");

  const std::size_t width = m.dim() + config.n_expand;
  const std::size_t out_dim = config.out_dim.value_or(m.dim());
  if (out_dim < 1 || out_dim > width || out_dim > classes.n_classes() - 1)
    throw Error(ErrorCode::BadDimension,
                "out_dim " + std::to_string(out_dim) + " must be in [1, min(" +
                    std::to_string(width) + ", " + std::to_string(classes.n_classes() - 1) + ")]");

  std::vector<double> enriched = expanded_values(m, config.n_expand);
  transfer_in_place(enriched, width, config.n_expand, classes);
  const ConstRowMap enriched_map(enriched.data(), static_cast<Eigen::Index>(m.rows()),
                                 static_cast<Eigen::Index>(width));

  const ScatterPair scatter =
      accumulate_scatter(enriched_map, classes.labels(), classes.n_classes(), config.weighting);
  LdaModel model = lda_fit(scatter, out_dim, config.shrinkage);

  std::vector<double> projected(m.rows() * out_dim);
  Eigen::Map<RowMatrix> projected_map(projected.data(), static_cast<Eigen::Index>(m.rows()),
                                      static_cast<Eigen::Index>(out_dim));
  projected_map.noalias() = enriched_map * model.transform;
  enriched.clear();
  enriched.shrink_to_fit();

  return {EmbeddingMatrix(m.vocab_ptr(), std::move(projected), out_dim), std::move(model)};
}

}  // namespace extrofit
