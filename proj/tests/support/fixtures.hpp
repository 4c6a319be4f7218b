#pragma once

// Deterministic synthetic inputs shared by unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "extrofit/embedding_io.hpp"
#include "extrofit/eval.hpp"
#include "extrofit/lexicon.hpp"

namespace fixtures {

inline extrofit::VocabularyPtr make_vocab(std::size_t n, const std::string& prefix = "w") {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back(prefix + std::to_string(i));
  return std::make_shared<extrofit::Vocabulary>(std::move(words));
}

inline extrofit::VocabularyPtr make_vocab(std::vector<std::string> words) {
  return std::make_shared<extrofit::Vocabulary>(std::move(words));
}

inline extrofit::EmbeddingMatrix random_matrix(std::size_t rows, std::size_t dim, std::uint64_t seed,
                                               double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> values(rows * dim);
  for (auto& v : values) v = normal(rng);
  return {make_vocab(rows), std::move(values), dim};
}

// 200 words in D dims: 20 planted synonym classes of 5 words drawn around a
// shared center, and 100 unrelated words. The lexicon links every class
// member to the first member of its class.
struct PlantedSynonyms {
  extrofit::EmbeddingMatrix vectors;
  extrofit::SynonymGraph graph;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // row pairs
};

inline PlantedSynonyms planted_synonyms(std::uint64_t seed = 7, std::size_t dim = 20,
                                        double noise = 0.8) {
  constexpr std::size_t kClasses = 20, kPerClass = 5, kLoners = 100;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t rows = kClasses * kPerClass + kLoners;
  std::vector<double> values(rows * dim);
  std::vector<double> center(dim);
  for (std::size_t c = 0; c < kClasses; ++c) {
    for (auto& x : center) x = normal(rng);
    for (std::size_t m = 0; m < kPerClass; ++m) {
      const std::size_t row = c * kPerClass + m;
      for (std::size_t k = 0; k < dim; ++k) values[row * dim + k] = center[k] + noise * normal(rng);
    }
  }
  for (std::size_t row = kClasses * kPerClass; row < rows; ++row)
    for (std::size_t k = 0; k < dim; ++k) values[row * dim + k] = normal(rng);

  auto vocab = make_vocab(rows);
  PlantedSynonyms out{extrofit::EmbeddingMatrix(vocab, std::move(values), dim), {}, {}};
  for (std::size_t c = 0; c < kClasses; ++c) {
    const std::size_t head = c * kPerClass;
    for (std::size_t m = 1; m < kPerClass; ++m) {
      out.graph.add_edge((*vocab)[head], (*vocab)[head + m]);
      out.edges.emplace_back(head, head + m);
    }
  }
  return out;
}

inline double mean_edge_cosine(const extrofit::EmbeddingMatrix& m,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  double s = 0.0;
  for (const auto& [a, b] : edges) s += extrofit::cosine_similarity(m.row(a), m.row(b));
  return s / static_cast<double>(edges.size());
}

// Random undirected graph over the vocabulary of `m` (edge probability p).
inline extrofit::SynonymGraph random_graph(const extrofit::Vocabulary& vocab, double p,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  extrofit::SynonymGraph g;
  for (std::size_t i = 0; i < vocab.size(); ++i)
    for (std::size_t j = i + 1; j < vocab.size(); ++j)
      if (coin(rng)) g.add_edge(vocab[i], vocab[j]);
  return g;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("extrofit-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures
