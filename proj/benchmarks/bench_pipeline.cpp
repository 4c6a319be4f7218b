#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "extrofit/embedding_io.hpp"
#include "extrofit/eval.hpp"

namespace {

extrofit::EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < rows; ++i) words.push_back("w" + std::to_string(i));
  std::vector<double> values(rows * dim);
  for (auto& v : values) v = normal(rng);
  return {std::make_shared<extrofit::Vocabulary>(std::move(words)), std::move(values), dim};
}

void BM_LoadText(benchmark::State& state) {
  const auto m = random_embeddings(static_cast<std::size_t>(state.range(0)), 100);
  std::ostringstream out;
  extrofit::save_text_embeddings(m, out);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    auto loaded = extrofit::load_text_embeddings(in);
    benchmark::DoNotOptimize(loaded.values().data());
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_LoadText)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_NearestNeighbors(benchmark::State& state) {
  const auto m = random_embeddings(static_cast<std::size_t>(state.range(0)), 300);
  for (auto _ : state) {
    auto n = extrofit::nearest_neighbors(m, "w0", 10);
    benchmark::DoNotOptimize(n.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NearestNeighbors)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
