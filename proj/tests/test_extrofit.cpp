#include <doctest.h>

#include <cmath>

#include "extrofit/error.hpp"
#include "extrofit/extrofit.hpp"
#include "fixtures.hpp"

using namespace extrofit;

namespace {

EmbeddingMatrix matrix(std::vector<std::string> words, std::vector<double> values, std::size_t dim) {
  return {fixtures::make_vocab(std::move(words)), std::move(values), dim};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an extrofit::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("representative value is the component mean") {
  CHECK(representative(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK(representative(std::vector<double>{0, 0, 0, 0}) == 0.0);
  CHECK(representative(std::vector<double>{-1, 1}) == 0.0);
}

TEST_CASE("expand appends copies of the representative value") {
  const auto one = expand(matrix({"a"}, {1, 2, 3}, 3), 1);
  CHECK(one.dim() == 4);
  CHECK(one.values() == std::vector<double>{1, 2, 3, 2});

  const auto two = expand(matrix({"a"}, {1, 3}, 2), 2);
  CHECK(two.values() == std::vector<double>{1, 3, 2, 2});

  const auto zero = expand(matrix({"a", "b"}, {0, 0, 0, 1, 1, 1}, 3), 5);
  CHECK(zero.dim() == 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(zero.row(0)[k] == 0.0);
  CHECK(zero.vocab() == matrix({"a", "b"}, {0, 0, 0, 1, 1, 1}, 3).vocab());
}

TEST_CASE("transfer replaces appended columns with the class mean") {
  // r = (2, 4, 7) for a, b, c
  const auto m = matrix({"a", "b", "c"}, {1, 3, 3, 5, 7, 7}, 2);
  SynonymGraph g;
  g.add_edge("a", "b");
  const auto classes = build_classes(g, m.vocab_ptr());
  const auto t = transfer(expand(m, 1), classes, 1);
  CHECK(t.row(0)[2] == 3.0);
  CHECK(t.row(1)[2] == 3.0);
  CHECK(t.row(2)[2] == 7.0);
  // leading columns untouched
  CHECK(t.row(0)[0] == 1.0);
  CHECK(t.row(1)[1] == 5.0);

  // r = (0, 3, 6), one class
  const auto m3 = matrix({"a", "b", "c"}, {0, 0, 3, 3, 6, 6}, 2);
  SynonymGraph chain;
  chain.add_edge("a", "b");
  chain.add_edge("b", "c");
  const auto t3 = transfer(expand(m3, 2), build_classes(chain, m3.vocab_ptr()), 2);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t3.row(i)[2] == 3.0);
    CHECK(t3.row(i)[3] == 3.0);
  }
}

TEST_CASE("transfer leaves zero variance within every class") {
  const auto p = fixtures::planted_synonyms(11);
  const auto classes = build_classes(p.graph, p.vectors.vocab_ptr());
  const auto t = transfer(expand(p.vectors, 3), classes, 3);
  for (std::uint32_t c = 0; c < classes.n_classes(); ++c) {
    const auto& members = classes.members(c);
    for (std::size_t col = t.dim() - 3; col < t.dim(); ++col)
      for (auto row : members) CHECK(t.row(row)[col] == t.row(members.front())[col]);
  }
}

TEST_CASE("transfer rejects a partition over another vocabulary") {
  const auto m = fixtures::random_matrix(4, 2, 1);
  const auto other = fixtures::make_vocab(4, "x");
  const auto classes = build_classes(SynonymGraph{}, other);
  CHECK(code_of([&] { transfer(expand(m, 1), classes, 1); }) == ErrorCode::PartitionMismatch);
}

TEST_CASE("extrofit output shape and finiteness") {
  const auto p = fixtures::planted_synonyms();
  const auto classes = build_classes(p.graph, p.vectors.vocab_ptr());
  const auto result = extrofit::extrofit(p.vectors, classes);
  CHECK(result.vectors.dim() == p.vectors.dim());
  CHECK(result.vectors.vocab() == p.vectors.vocab());
  for (double v : result.vectors.values()) CHECK(std::isfinite(v));

  ExtrofitConfig cfg;
  cfg.n_expand = 2;
  cfg.out_dim = 7;
  const auto small = extrofit::extrofit(p.vectors, classes, cfg);
  CHECK(small.vectors.dim() == 7);
  CHECK(small.model.in_dim == p.vectors.dim() + 2);
}

TEST_CASE("extrofit output is the transferred matrix times the returned model") {
  const auto p = fixtures::planted_synonyms(3, 12);
  const auto classes = build_classes(p.graph, p.vectors.vocab_ptr());
  for (auto weighting : {Weighting::ClassSize, Weighting::Unweighted}) {
    ExtrofitConfig cfg;
    cfg.weighting = weighting;
    const auto result = extrofit::extrofit(p.vectors, classes, cfg);
    const auto t = transfer(expand(p.vectors, 1), classes, 1);
    const RowMatrix expected = t.data() * result.model.transform;
    const double diff = (result.vectors.data() - expected).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-10 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("extrofit contracts synonym pairs on planted fixtures") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = fixtures::planted_synonyms(seed);
    const auto classes = build_classes(p.graph, p.vectors.vocab_ptr());
    const auto result = extrofit::extrofit(p.vectors, classes);
    CHECK(fixtures::mean_edge_cosine(result.vectors, p.edges) >
          fixtures::mean_edge_cosine(p.vectors, p.edges));
  }
}

TEST_CASE("identical input rows stay identical") {
  auto base = fixtures::random_matrix(30, 4, 9);
  std::vector<double> values = base.values();
  std::copy_n(values.begin(), 4, values.begin() + 4);  // row 1 := row 0
  const EmbeddingMatrix m(base.vocab_ptr(), std::move(values), 4);
  SynonymGraph g;
  g.add_edge(m.vocab()[0], m.vocab()[1]);

  // the pair alone carries no within-class spread: S_W = 0 cannot be regularised
  CHECK(code_of([&] { extrofit::extrofit(m, build_classes(g, m.vocab_ptr())); }) ==
        ErrorCode::RankDeficient);

  for (std::size_t i = 3; i < 8; ++i) g.add_edge(m.vocab()[2], m.vocab()[i]);
  const auto result = extrofit::extrofit(m, build_classes(g, m.vocab_ptr()));
  for (std::size_t k = 0; k < 4; ++k) CHECK(result.vectors.row(0)[k] == result.vectors.row(1)[k]);
}

TEST_CASE("extrofit rejects lexicons without synonymy and bad configs") {
  const auto m = fixtures::random_matrix(10, 3, 2);
  CHECK(code_of([&] { extrofit::extrofit(m, build_classes(SynonymGraph{}, m.vocab_ptr())); }) ==
        ErrorCode::DegenerateLexicon);

  SynonymGraph all;
  for (std::size_t i = 1; i < m.rows(); ++i) all.add_edge(m.vocab()[0], m.vocab()[i]);
  CHECK(code_of([&] { extrofit::extrofit(m, build_classes(all, m.vocab_ptr())); }) ==
        ErrorCode::DegenerateLexicon);

  const auto p = fixtures::planted_synonyms();
  const auto classes = build_classes(p.graph, p.vectors.vocab_ptr());
  ExtrofitConfig cfg;
  cfg.out_dim = p.vectors.dim() + 2;
  CHECK(code_of([&] { extrofit::extrofit(p.vectors, classes, cfg); }) == ErrorCode::BadDimension);
  cfg.out_dim = 0;
  CHECK(code_of([&] { extrofit::extrofit(p.vectors, classes, cfg); }) == ErrorCode::BadDimension);
  cfg = {};
  cfg.n_expand = 0;
  CHECK(code_of([&] { extrofit::extrofit(p.vectors, classes, cfg); }) == ErrorCode::BadDimension);
}
