#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "extrofit/embedding_io.hpp"

namespace extrofit {

enum class DatasetFormat { Men3k, Ws353, Simlex999, Rg65, Generic };

std::string_view to_string(DatasetFormat format) noexcept;
std::optional<DatasetFormat> parse_dataset_format(std::string_view tag) noexcept;

struct WordPair {
  std::string first;
  std::string second;
  double score = 0.0;
};

struct SimilarityDataset {
  std::string name;
  DatasetFormat format = DatasetFormat::Generic;
  std::vector<WordPair> pairs;
  // Soft validation notes, e.g. scores outside the dataset's published range.
  std::vector<std::string> warnings;
};

struct DatasetOptions {
  bool lowercase = false;
};

// Layouts:
//   men3k, rg65  `w1 w2 score`, whitespace separated (rg65 also accepts ';')
//   ws353        tab- or comma-separated, first three columns, optional header
//   simlex999    tab-separated with a header naming the SimLex999 column
//   generic      `w1<TAB>w2<TAB>score`
// Throws UnparseableLine, WrongColumnCount and EmptyInput.
SimilarityDataset load_dataset(std::istream& in, DatasetFormat format,
                               const DatasetOptions& options = {});

// Concatenates several files of one dataset (e.g. train and test splits).
SimilarityDataset load_dataset(std::span<const std::filesystem::path> paths, DatasetFormat format,
                               const DatasetOptions& options = {});

// 1-based ranks, ties share the average of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Throws LengthMismatch, and
// DegenerateInput for fewer than two values or a constant list.
double spearman(std::span<const double> xs, std::span<const double> ys);

// 0 when either vector has zero norm. Exactly 1 for bitwise-identical
// non-zero vectors.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct EvalReport {
  std::string dataset;
  double spearman = 0.0;
  std::size_t n_scored = 0;
  std::size_t n_skipped_oov = 0;
};

// Spearman correlation between cosine similarity and human score over pairs
// whose words are both in the vocabulary. Throws DegenerateInput when fewer
// than two pairs are scorable or the model scores are constant.
EvalReport evaluate(const EmbeddingMatrix& m, const SimilarityDataset& dataset);

// `dataset<TAB>spearman<TAB>n_scored<TAB>n_skipped`
std::string to_tsv(const EvalReport& report);

struct Neighbor {
  std::string token;
  double cosine = 0.0;
};

struct NeighborStats {
  std::size_t zero_norm_skipped = 0;
};

// Top-k words by cosine to `token`, descending, cue excluded, ties in
// vocabulary order. Zero-norm rows are skipped and counted.
// Throws UnknownToken, InvalidConfig for k < 1 and DegenerateInput for a
// zero-norm cue.
std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& m, std::string_view token,
                                        std::size_t k, NeighborStats* stats = nullptr);

// `rank<TAB>token<TAB>cosine` lines, rank starting at 1.
void write_neighbors_tsv(std::ostream& out, std::span<const Neighbor> neighbors);

}  // namespace extrofit
