#include "extrofit/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "extrofit/error.hpp"
#include "extrofit/gz_stream.hpp"
#include "text.hpp"

namespace extrofit {

namespace {

struct ScoreRange {
  double lo;
  double hi;
};

std::optional<ScoreRange> published_range(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::Men3k: return ScoreRange{0.0, 50.0};
    case DatasetFormat::Ws353: return ScoreRange{0.0, 10.0};
    case DatasetFormat::Simlex999: return ScoreRange{0.0, 10.0};
    case DatasetFormat::Rg65: return ScoreRange{0.0, 4.0};
    case DatasetFormat::Generic: return std::nullopt;
  }
  return std::nullopt;
}

void split_rg65(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  auto sep = [](char c) { return detail::is_space(c) || c == ';'; };
  while (i < line.size()) {
    while (i < line.size() && sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

std::string format_double(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

class DatasetParser {
 public:
  DatasetParser(SimilarityDataset& out, const DatasetOptions& options)
      : out_(out), options_(options) {}

  void parse(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, raw)) {
      ++line_no;
      const std::string_view line = detail::trim(raw);
      if (line.empty()) continue;
      const bool is_first = first;
      first = false;
      parse_line(line, line_no, is_first);
    }
    if (in.bad()) throw Error(ErrorCode::Io, "read failure");
  }

 private:
  void parse_line(std::string_view line, std::size_t line_no, bool first) {
    switch (out_.format) {
      case DatasetFormat::Men3k:
        detail::split_ws(line, fields_);
        require_exact(3, line_no);
        add(fields_[0], fields_[1], fields_[2], line_no);
        break;
      case DatasetFormat::Rg65:
        split_rg65(line, fields_);
        require_exact(3, line_no);
        add(fields_[0], fields_[1], fields_[2], line_no);
        break;
      case DatasetFormat::Generic:
        detail::split_on(line, '\t', fields_);
        require_exact(3, line_no);
        add(fields_[0], fields_[1], fields_[2], line_no);
        break;
      case DatasetFormat::Ws353:
        detail::split_on(line, line.find('\t') != std::string_view::npos ? '\t' : ',', fields_);
        if (fields_.size() < 3)
          throw Error::at_line(ErrorCode::WrongColumnCount, line_no, "expected >= 3 columns");
        if (first && !detail::parse_double(detail::trim(fields_[2]))) return;  // header
        add(fields_[0], fields_[1], fields_[2], line_no);
        break;
      case DatasetFormat::Simlex999:
        detail::split_on(line, '\t', fields_);
        if (first) {
          const auto it = std::find_if(fields_.begin(), fields_.end(), [](std::string_view f) {
            return detail::trim(f) == "SimLex999";
          });
          if (it == fields_.end())
            throw Error::at_line(ErrorCode::UnparseableLine, line_no, "missing SimLex999 header");
          score_column_ = static_cast<std::size_t>(it - fields_.begin());
          return;
        }
        if (fields_.size() <= score_column_ || fields_.size() < 2)
          throw Error::at_line(ErrorCode::WrongColumnCount, line_no,
                               "expected >= " + std::to_string(score_column_ + 1) + " columns");
        add(fields_[0], fields_[1], fields_[score_column_], line_no);
        break;
    }
  }

  void require_exact(std::size_t n, std::size_t line_no) const {
    if (fields_.size() != n)
      throw Error::at_line(ErrorCode::WrongColumnCount, line_no,
                           "expected " + std::to_string(n) + " columns, got " +
                               std::to_string(fields_.size()));
  }

  void add(std::string_view a, std::string_view b, std::string_view score_text, std::size_t line_no) {
    a = detail::trim(a);
    b = detail::trim(b);
    score_text = detail::trim(score_text);
    if (a.empty() || b.empty())
      throw Error::at_line(ErrorCode::UnparseableLine, line_no, "empty word");
    const auto score = detail::parse_double(score_text);
    if (!score || !std::isfinite(*score))
      throw Error::at_line(ErrorCode::UnparseableLine, line_no,
                           "bad score '" + std::string(score_text) + "'");
    if (const auto range = published_range(out_.format);
        range && (*score < range->lo || *score > range->hi)) {
      out_.warnings.push_back("line " + std::to_string(line_no) + ": score " +
                              std::string(score_text) + " outside [" +
                              format_double(range->lo, 0) + ", " + format_double(range->hi, 0) +
                              "]");
    }
    WordPair pair;
    pair.first = options_.lowercase ? detail::lowercase(a) : std::string(a);
    pair.second = options_.lowercase ? detail::lowercase(b) : std::string(b);
    pair.score = *score;
    out_.pairs.push_back(std::move(pair));
  }

  SimilarityDataset& out_;
  const DatasetOptions& options_;
  std::vector<std::string_view> fields_;
  std::size_t score_column_ = 3;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

std::string_view to_string(DatasetFormat format) noexcept {
  switch (format) {
    case DatasetFormat::Men3k: return "men3k";
    case DatasetFormat::Ws353: return "ws353";
    case DatasetFormat::Simlex999: return "simlex999";
    case DatasetFormat::Rg65: return "rg65";
    case DatasetFormat::Generic: return "generic";
  }
  return "generic";
}

std::optional<DatasetFormat> parse_dataset_format(std::string_view tag) noexcept {
  for (auto f : {DatasetFormat::Men3k, DatasetFormat::Ws353, DatasetFormat::Simlex999,
                 DatasetFormat::Rg65, DatasetFormat::Generic})
    if (to_string(f) == tag) return f;
  return std::nullopt;
}

SimilarityDataset load_dataset(std::istream& in, DatasetFormat format,
                               const DatasetOptions& options) {
  SimilarityDataset out;
  out.name = std::string(to_string(format));
  out.format = format;
  DatasetParser(out, options).parse(in);
  if (out.pairs.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no word pairs");
  return out;
}

SimilarityDataset load_dataset(std::span<const std::filesystem::path> paths, DatasetFormat format,
                               const DatasetOptions& options) {
  SimilarityDataset out;
  out.name = std::string(to_string(format));
  out.format = format;
  for (const auto& path : paths) {
    InputFile file(path);
    DatasetParser(out, options).parse(file.stream());
  }
  if (out.pairs.empty()) throw Error(ErrorCode::EmptyInput, "dataset has no word pairs");
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) share rank mean(i+1 .. j)
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(xs.size()) + " vs " + std::to_string(ys.size()));
  if (xs.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least 2 values");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) throw Error(ErrorCode::DegenerateInput, "constant input");

  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // ranks always average (n+1)/2
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = dot(a, a);
  const double nb = dot(b, b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / std::sqrt(na * nb);
}

EvalReport evaluate(const EmbeddingMatrix& m, const SimilarityDataset& dataset) {
  EvalReport report;
  report.dataset = dataset.name;
  std::vector<double> model;
  std::vector<double> human;
  for (const auto& pair : dataset.pairs) {
    const auto a = m.lookup(pair.first);
    const auto b = m.lookup(pair.second);
    if (!a || !b) {
      ++report.n_skipped_oov;
      continue;
    }
    model.push_back(cosine_similarity(*a, *b));
    human.push_back(pair.score);
  }
  report.n_scored = model.size();
  if (report.n_scored < 2)
    throw Error(ErrorCode::DegenerateInput,
                dataset.name + ": only " + std::to_string(report.n_scored) + " scorable pairs");
  report.spearman = spearman(model, human);
  return report;
}

std::string to_tsv(const EvalReport& report) {
  return report.dataset + '\t' + format_double(report.spearman, 4) + '\t' +
         std::to_string(report.n_scored) + '\t' + std::to_string(report.n_skipped_oov);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingMatrix& m, std::string_view token,
                                        std::size_t k, NeighborStats* stats) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  const auto cue_row = m.vocab().find(token);
  if (!cue_row) throw Error(ErrorCode::UnknownToken, std::string(token));
  const auto cue = m.row(*cue_row);
  const double cue_norm = dot(cue, cue);
  if (cue_norm == 0.0) throw Error(ErrorCode::DegenerateInput, "cue vector has zero norm");

  NeighborStats local;
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i == *cue_row) continue;
    const auto row = m.row(i);
    const double norm = dot(row, row);
    if (norm == 0.0) {
      ++local.zero_norm_skipped;
      continue;
    }
    scored.emplace_back(dot(cue, row) / std::sqrt(cue_norm * norm), i);
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r) out.push_back({m.vocab()[scored[r].second], scored[r].first});
  if (stats) *stats = local;
  return out;
}

void write_neighbors_tsv(std::ostream& out, std::span<const Neighbor> neighbors) {
  for (std::size_t r = 0; r < neighbors.size(); ++r)
    out << (r + 1) << '\t' << neighbors[r].token << '\t' << format_double(neighbors[r].cosine, 6)
        << '\n';
}

}  // namespace extrofit
