#include <benchmark/benchmark.h>

#include <random>

#include "extrofit/linalg.hpp"

namespace {

struct Problem {
  extrofit::RowMatrix data;
  std::vector<std::uint32_t> labels;
  std::size_t n_classes;
};

// Roughly the shape of a lexicon-labelled vocabulary: many singletons, a
// minority of rows in small classes.
Problem make_problem(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  Problem p{extrofit::RowMatrix(rows, dim), std::vector<std::uint32_t>(rows), 0};
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < rows;) {
    const std::size_t size = (i % 10 == 0) ? 2 + rng() % 4 : 1;
    for (std::size_t m = 0; m < size && i < rows; ++m, ++i) p.labels[i] = next;
    ++next;
  }
  p.n_classes = next;
  for (Eigen::Index i = 0; i < p.data.size(); ++i) p.data.data()[i] = normal(rng);
  return p;
}

void BM_AccumulateScatter(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto s = extrofit::accumulate_scatter(p.data, p.labels, p.n_classes);
    benchmark::DoNotOptimize(s.within.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AccumulateScatter)->Args({20000, 51})->Args({20000, 301})->Unit(benchmark::kMillisecond);

void BM_LdaFit(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto p = make_problem(20000, dim + 1);
  const auto s = extrofit::accumulate_scatter(p.data, p.labels, p.n_classes);
  for (auto _ : state) {
    auto model = extrofit::lda_fit(s, dim, 1e-4);
    benchmark::DoNotOptimize(model.transform.data());
  }
}
BENCHMARK(BM_LdaFit)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
