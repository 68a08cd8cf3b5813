#include <benchmark/benchmark.h>

#include <cstdint>

#include "perclab/cluster_explorer.hpp"
#include "perclab/graph.hpp"
#include "perclab/mass_vector.hpp"
#include "perclab/percolation.hpp"
#include "perclab/spectral.hpp"
#include "perclab/union_find.hpp"
#include "perclab/walk.hpp"

namespace {

using namespace perclab;

void BM_UnionFindTorus(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = build_torus({side, side});
  const std::uint64_t seed = 42;
  for (auto _ : state) {
    UnionFind uf(g.vertex_count());
    std::size_t merges = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (!edge_open(seed, e, 0.5)) continue;
      const auto& edge = g.edge(e);
      merges += uf.unite(edge.u, edge.v);
    }
    benchmark::DoNotOptimize(merges);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_UnionFindTorus)->Arg(64)->Arg(256)->Arg(1024);

void BM_SampleConfiguration(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = build_torus({side, side});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample(g, 0.5, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_SampleConfiguration)->Arg(64)->Arg(256);

void BM_ClusterExplore(benchmark::State& state) {
  const Graph g = build_torus({512, 512});
  const double p = static_cast<double>(state.range(0)) / 100.0;
  ClusterExplorer explorer(g);
  ExploreLimits limits;
  limits.max_vertices = 1 << 16;
  std::uint64_t seed = 0;
  std::int64_t visited = 0;
  for (auto _ : state) visited += static_cast<std::int64_t>(explorer.explore(0, p, ++seed, limits).vertices);
  state.SetItemsProcessed(visited);
}
BENCHMARK(BM_ClusterExplore)->Arg(40)->Arg(50)->Arg(60);

void BM_WalkEvolve(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Graph g = build_torus({side, side});
  const auto start = MassVector::delta(g.vertex_count(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(g, start, 16));
  state.SetItemsProcessed(state.iterations() * 16 * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_WalkEvolve)->Arg(64)->Arg(256);

void BM_LambdaBall(benchmark::State& state) {
  const Graph g = build_torus({128, 128});
  const Domain domain = ball(g, 0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_a(g, domain).value);
  state.counters["domain"] = static_cast<double>(domain.size());
}
BENCHMARK(BM_LambdaBall)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
