#include "extrofit/embedding_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "extrofit/error.hpp"
#include "extrofit/gz_stream.hpp"
#include "text.hpp"

namespace extrofit {

namespace {

bool has_whitespace(std::string_view s) {
  for (char c : s)
    if (detail::is_space(c)) return true;
  return false;
}

void check_finite(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw Error(ErrorCode::NonFiniteUpdate, "non-finite entry at flat index " + std::to_string(i));
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size());
  index_.reserve(words.size());
  for (auto& w : words) {
    if (w.empty() || has_whitespace(w))
      throw Error(ErrorCode::UnparseableLine, "invalid token '" + w + "'");
    if (index_.contains(w)) throw Error(ErrorCode::DuplicateToken, w);
    try_add(std::move(w));
  }
}

bool Vocabulary::try_add(std::string token) {
  if (index_.contains(token)) return false;
  index_.emplace(token, words_.size());
  words_.push_back(std::move(token));
  return true;
}

std::optional<std::size_t> Vocabulary::find(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix::EmbeddingMatrix(VocabularyPtr vocab, std::vector<double> values, std::size_t dim)
    : vocab_(std::move(vocab)), values_(std::move(values)), dim_(dim) {
  if (!vocab_) throw Error(ErrorCode::ShapeMismatch, "null vocabulary");
  if (dim_ < 1) throw Error(ErrorCode::BadDimension, "embedding dimension must be >= 1");
  if (values_.size() != vocab_->size() * dim_)
    throw Error(ErrorCode::ShapeMismatch, std::to_string(values_.size()) + " values for " +
                                              std::to_string(vocab_->size()) + " x " +
                                              std::to_string(dim_));
  check_finite(values_);
}

EmbeddingMatrix::EmbeddingMatrix(VocabularyPtr vocab, const RowMatrix& data)
    : EmbeddingMatrix(std::move(vocab),
                      std::vector<double>(data.data(), data.data() + data.size()),
                      static_cast<std::size_t>(data.cols())) {}

std::optional<std::span<const double>> EmbeddingMatrix::lookup(std::string_view token) const {
  const auto i = vocab_->find(token);
  if (!i) return std::nullopt;
  return row(*i);
}

std::optional<std::span<const double>> lookup(const EmbeddingMatrix& m, std::string_view token) {
  return m.lookup(token);
}

EmbeddingMatrix load_text_embeddings(std::istream& in, const LoadOptions& options,
                                     LoadStats* stats) {
  LoadStats local;
  auto vocab = std::make_shared<Vocabulary>();
  std::vector<double> values;
  std::size_t dim = 0;
  bool first_content = true;

  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++local.lines_read;
    detail::split_ws(line, fields);
    if (fields.empty()) continue;

    if (first_content) {
      first_content = false;
      if (fields.size() == 2 && detail::is_integer(fields[0]) && detail::is_integer(fields[1])) {
        local.header_skipped = true;
        continue;
      }
    }
    if (fields.size() < 2)
      throw Error::at_line(ErrorCode::InconsistentDimension, line_no, "no vector values");
    const std::size_t n_values = fields.size() - 1;
    if (dim == 0) {
      dim = n_values;
    } else if (n_values != dim) {
      throw Error::at_line(ErrorCode::InconsistentDimension, line_no,
                           "expected " + std::to_string(dim) + " values, got " +
                               std::to_string(n_values));
    }

    const std::size_t offset = values.size();
    values.resize(offset + dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto v = detail::parse_double(fields[k + 1]);
      if (!v || !std::isfinite(*v)) {
        values.resize(offset);
        throw Error::at_line(ErrorCode::UnparseableNumber, line_no,
                             "'" + std::string(fields[k + 1]) + "'");
      }
      values[offset + k] = *v;
    }

    std::string token = options.lowercase ? detail::lowercase(fields[0]) : std::string(fields[0]);
    if (!vocab->try_add(token)) {
      values.resize(offset);
      if (options.on_duplicate == DuplicatePolicy::Error)
        throw Error(ErrorCode::DuplicateToken, token);
      ++local.duplicates_skipped;
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure");
  if (vocab->empty()) throw Error(ErrorCode::EmptyInput, "no embedding rows");

  if (stats) *stats = local;
  return EmbeddingMatrix(std::move(vocab), std::move(values), dim);
}

EmbeddingMatrix load_text_embeddings(const std::filesystem::path& path, const LoadOptions& options,
                                     LoadStats* stats) {
  InputFile file(path);
  return load_text_embeddings(file.stream(), options, stats);
}

void save_text_embeddings(const EmbeddingMatrix& m, std::ostream& out, const SaveOptions& options) {
  if (!options.full_precision && options.precision < 1)
    throw Error(ErrorCode::BadDimension, "precision must be >= 1");
  std::string line;
  char buf[64];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.assign(m.vocab()[i]);
    for (double v : m.row(i)) {
      const auto res = options.full_precision
                           ? std::to_chars(buf, buf + sizeof buf, v)
                           : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed,
                                           options.precision);
      line.push_back(' ');
      line.append(buf, res.ptr);
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failure");
}

void save_text_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path,
                          const SaveOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  save_text_embeddings(m, out, options);
}

}  // namespace extrofit
