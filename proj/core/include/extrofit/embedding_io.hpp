#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace extrofit {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

// Ordered set of unique tokens; position in the list is the matrix row.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws DuplicateToken, or UnparseableLine if a token is empty or holds whitespace.
  explicit Vocabulary(std::vector<std::string> words);

  // Appends `token` unless already present. Returns false for a duplicate.
  bool try_add(std::string token);

  std::optional<std::size_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::string& operator[](std::size_t i) const { return words_[i]; }
  const std::vector<std::string>& words() const noexcept { return words_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// Vocabulary-indexed dense matrix of word vectors. Immutable once built; the
// vocabulary is shared between matrices derived from one another.
class EmbeddingMatrix {
 public:
  // `values` is row-major, |vocab| * dim entries. Throws ShapeMismatch when the
  // sizes disagree, BadDimension when dim < 1, NonFiniteUpdate on NaN/Inf.
  EmbeddingMatrix(VocabularyPtr vocab, std::vector<double> values, std::size_t dim);
  EmbeddingMatrix(VocabularyPtr vocab, const RowMatrix& data);

  std::size_t rows() const noexcept { return vocab_->size(); }
  std::size_t dim() const noexcept { return dim_; }

  const Vocabulary& vocab() const noexcept { return *vocab_; }
  const VocabularyPtr& vocab_ptr() const noexcept { return vocab_; }

  ConstRowMap data() const noexcept {
    return {values_.data(), static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(dim_)};
  }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }

  std::optional<std::span<const double>> lookup(std::string_view token) const;

 private:
  VocabularyPtr vocab_;
  std::vector<double> values_;
  std::size_t dim_;
};

enum class DuplicatePolicy { KeepFirst, Error };

struct LoadOptions {
  bool lowercase = false;
  DuplicatePolicy on_duplicate = DuplicatePolicy::KeepFirst;
};

struct LoadStats {
  std::size_t lines_read = 0;
  std::size_t duplicates_skipped = 0;
  bool header_skipped = false;
};

// Parses `token v_1 ... v_D` lines. A first line of exactly two integers is
// taken as a Word2Vec `N D` header and skipped.
EmbeddingMatrix load_text_embeddings(std::istream& in, const LoadOptions& options = {},
                                     LoadStats* stats = nullptr);

// As above; files ending in .gz are inflated.
EmbeddingMatrix load_text_embeddings(const std::filesystem::path& path,
                                     const LoadOptions& options = {},
                                     LoadStats* stats = nullptr);

struct SaveOptions {
  int precision = 6;
  // Shortest representation that round-trips exactly; ignores `precision`.
  bool full_precision = false;
};

void save_text_embeddings(const EmbeddingMatrix& m, std::ostream& out,
                          const SaveOptions& options = {});
void save_text_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path,
                          const SaveOptions& options = {});

std::optional<std::span<const double>> lookup(const EmbeddingMatrix& m, std::string_view token);

}  // namespace extrofit
