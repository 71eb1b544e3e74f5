#include <benchmark/benchmark.h>

#include <cstddef>

#include "diffrf/datagen.hpp"
#include "diffrf/forest.hpp"
#include "diffrf/scoring.hpp"

using namespace diffrf;

namespace {

const DataMatrix& train_data() {
  static DataMatrix m =
      gen_gaussian_cluster(20000, {0.0, 0.0, 0.0, 0.0}, {3.0, 3.0, 3.0, 3.0}, 17);
  return m;
}

const Forest& scoring_forest() {
  static Forest f = [] {
    ForestConfig fc;
    fc.trees = 128;
    fc.sample_size = 1024;
    fc.alpha = 2.0;
    fc.seed = 5;
    return build_forest(train_data(), fc);
  }();
  return f;
}

DataMatrix make_batch(std::size_t rows) {
  return gen_gaussian_cluster(rows, {0.0, 0.0, 0.0, 0.0}, {3.0, 3.0, 3.0, 3.0}, 23);
}

}  // namespace

static void BM_BuildForest(benchmark::State& state) {
  ForestConfig fc;
  fc.trees = static_cast<std::size_t>(state.range(0));
  fc.sample_size = 256;
  fc.alpha = 2.0;
  fc.seed = 3;
  for (auto _ : state) {
    Forest f = build_forest(train_data(), fc);
    benchmark::DoNotOptimize(f.trees.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildForest)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_PointwiseScore(benchmark::State& state) {
  const Forest& f = scoring_forest();
  DataMatrix batch = make_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    ScoreVector s = pointwise_score(f, batch);
    benchmark::DoNotOptimize(s.scores.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PointwiseScore)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

static void BM_BatchScores(benchmark::State& state) {
  const Forest& f = scoring_forest();
  DataMatrix batch = make_batch(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    BatchScores s = score_batch(f, batch);
    benchmark::DoNotOptimize(s.collective.scores.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchScores)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
