#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "stylo/clustering.hpp"
#include "stylo/embedding.hpp"
#include "stylo/gridsearch.hpp"
#include "stylo/synth.hpp"

using namespace stylo;

namespace {

const Corpus& corpus() {
  static const Corpus c = [] {
    SynthSpec spec;
    spec.verses = 1000;
    spec.divergence = 0.3;
    spec.seed = 1;
    return synthesize(spec);
  }();
  return c;
}

std::vector<std::size_t> all_rows() {
  std::vector<std::size_t> rows(corpus().size());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

// Args: window, n-gram size.
static void BM_Embed(benchmark::State& state) {
  const auto rows = all_rows();
  EmbedConfig cfg;
  cfg.window_k = static_cast<std::size_t>(state.range(0));
  cfg.ngram_n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto e = embed(corpus(), rows, corpus().labels(), cfg);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(rows.size()));
}
BENCHMARK(BM_Embed)->Args({0, 1})->Args({4, 1})->Args({4, 3})->Args({10, 5})->Unit(benchmark::kMillisecond);

// Arg: restarts.
static void BM_KMeans(benchmark::State& state) {
  const auto rows = all_rows();
  EmbedConfig cfg;
  cfg.window_k = 2;
  const auto e = embed(corpus(), std::span(rows).first(250), corpus().labels(), cfg);
  KMeansConfig km;
  km.restarts = static_cast<std::size_t>(state.range(0));
  km.seed = 7;
  for (auto _ : state) {
    auto r = kmeans_two(e.matrix.x, km);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_KMeans)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

// One grid cell on a 250-verse subsample. Args: window, n-gram size.
static void BM_GridCell(benchmark::State& state) {
  const auto view = subsample(corpus().labels(), 250, 50, 3);
  for (auto _ : state) {
    const double ba = evaluate_cell(corpus(), view, corpus().labels(), Representation::Lexeme,
                                    static_cast<std::size_t>(state.range(0)),
                                    static_cast<std::size_t>(state.range(1)), {}, {});
    benchmark::DoNotOptimize(ba);
  }
}
BENCHMARK(BM_GridCell)->Args({1, 1})->Args({4, 2})->Args({10, 10})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
