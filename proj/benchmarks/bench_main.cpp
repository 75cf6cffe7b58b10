#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "roleforge/capitalists.hpp"
#include "roleforge/clustering.hpp"
#include "roleforge/louvain.hpp"
#include "roleforge/measures.hpp"

using namespace roleforge;

namespace {

DirectedGraph network(std::size_t n) {
  gen::Rng rng(n);
  const auto net = gen::community_network(n, 20, n / 250, rng);
  return gen::to_graph(net.n, net.arcs);
}

void BM_Louvain(benchmark::State& state) {
  const auto g = network(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(louvain_directed(g).modularity);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.arc_count()));
}
BENCHMARK(BM_Louvain)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_RoleMeasures(benchmark::State& state) {
  const auto g = network(static_cast<std::size_t>(state.range(0)));
  const auto p = louvain_directed(g).partition;
  for (auto _ : state) benchmark::DoNotOptimize(role_measures(g, p));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.arc_count()));
}
BENCHMARK(BM_RoleMeasures)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_DetectCapitalists(benchmark::State& state) {
  const auto g = network(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(detect_capitalists(g));
}
BENCHMARK(BM_DetectCapitalists)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_KMeans(benchmark::State& state) {
  gen::Rng rng(11);
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto b = gen::blobs(k, 2000, 8, 0.5, 4.0, rng);
  KMeansConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(b.points, k, cfg).inertia);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * b.points.rows()));
}
BENCHMARK(BM_KMeans)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
