#include <benchmark/benchmark.h>

#include "nsub/interchange.hpp"
#include "support/generators.hpp"

namespace {

using namespace nsub;

void BM_AppendEntities(benchmark::State& state) {
  for (auto _ : state) {
    SubstrateStore store;
    for (int i = 0; i < state.range(0); ++i) store.create_entity(regimes::K5, "zone-" + std::to_string(i));
    benchmark::DoNotOptimize(store.entity_count());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AppendEntities)->Arg(1000)->Arg(10000);

void BM_AppendEdges(benchmark::State& state) {
  SubstrateStore seeded;
  for (int i = 0; i < 1000; ++i) seeded.create_entity(regimes::K5, "zone-" + std::to_string(i));
  for (auto _ : state) {
    SubstrateStore store = seeded;
    for (int i = 1; i < 1000; ++i) {
      store.add_relation(RelationType::NestedIn, "zone-" + std::to_string(i), "zone-" + std::to_string(i - 1));
    }
  }
  state.SetItemsProcessed(state.iterations() * 999);
}
BENCHMARK(BM_AppendEdges);

LayeredStore sample_store() {
  testing::Rng rng(1);
  auto store = testing::random_substrate(rng, 2000);
  for (int i = 0; i < 5; ++i) store.attach(testing::random_layer(store, rng, "L" + std::to_string(i)));
  return store;
}

void BM_ExportLog(benchmark::State& state) {
  const auto store = sample_store();
  for (auto _ : state) benchmark::DoNotOptimize(export_log(store));
}
BENCHMARK(BM_ExportLog)->Unit(benchmark::kMillisecond);

void BM_ImportLog(benchmark::State& state) {
  const auto log = export_log(sample_store());
  for (auto _ : state) benchmark::DoNotOptimize(import_log(log));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(log.size()));
}
BENCHMARK(BM_ImportLog)->Unit(benchmark::kMillisecond);

void BM_ExportClif(benchmark::State& state) {
  const auto store = sample_store();
  for (auto _ : state) benchmark::DoNotOptimize(export_clif(store));
}
BENCHMARK(BM_ExportClif)->Unit(benchmark::kMillisecond);

}  // namespace
