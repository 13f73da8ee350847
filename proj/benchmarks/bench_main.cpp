#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "linklabel/cluster_counts.hpp"
#include "linklabel/clustering.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/planted.hpp"
#include "linklabel/predictors.hpp"

using namespace linklabel;

namespace {

const PlantedGraph& planted(std::size_t nodes) {
  static std::map<std::size_t, PlantedGraph> cache;
  auto it = cache.find(nodes);
  if (it == cache.end()) {
    PlantedOptions o;
    o.n_nodes = nodes;
    o.n_roles = 5;
    o.edge_prob = 20.0 / static_cast<double>(nodes);
    o.noise = 0.1;
    it = cache.emplace(nodes, generate_planted(o)).first;
  }
  return it->second;
}

std::vector<PredictionQuery> queries(const SignedGraph& g, std::size_t count) {
  std::vector<PredictionQuery> out;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.node_count() - 1));
  while (out.size() < count) {
    const NodeId i = node(rng), j = node(rng);
    if (i != j && !g.label_of(i, j)) out.push_back({i, j});
  }
  return out;
}

void BM_NamCountOnDemand(benchmark::State& state) {
  const SignedGraph& g = planted(state.range(0)).graph;
  const CooccurrenceCounts counts(g);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.node_count() - 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(counts.count(node(rng), 0, node(rng), kAny));
  }
}
BENCHMARK(BM_NamCountOnDemand)->Arg(1000)->Arg(10000);

void BM_NamPrecompute(benchmark::State& state) {
  const SignedGraph& g = planted(state.range(0)).graph;
  for (auto _ : state) {
    benchmark::DoNotOptimize(CooccurrenceCounts::precompute(g).entry_count());
  }
}
BENCHMARK(BM_NamPrecompute)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GibbsSweep(benchmark::State& state) {
  const SignedGraph& g = planted(state.range(0)).graph;
  ClusterConfig cfg;
  cfg.k = static_cast<std::size_t>(state.range(1));
  Rng rng(3);
  std::vector<ClusterId> a(g.node_count());
  for (auto& c : a) c = static_cast<ClusterId>(rng.below(cfg.k));
  Partition p(g, a, cfg.k);
  cfg.greedy = false;
  for (auto _ : state) benchmark::DoNotOptimize(gibbs_sweep(g, p, cfg, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}
BENCHMARK(BM_GibbsSweep)->Args({1000, 5})->Args({1000, 30})->Args({10000, 30})
    ->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const PlantedGraph& pg = planted(2000);
  const SignedGraph& g = pg.graph;
  const CooccurrenceCounts counts(g);
  const Partition p(g, pg.roles, pg.n_roles);
  const ClusterCounts cc(g, p);
  const ModelInputs in(g, counts, &p, &cc, SmoothingConfig{});
  const auto qs = queries(g, 256);
  const auto kind = static_cast<ModelKind>(state.range(0));
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(in, kind, qs[q++ % qs.size()]).defined);
  }
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Predict)->DenseRange(static_cast<int>(ModelKind::kLtlgm),
                                  static_cast<int>(ModelKind::kScgm));

}  // namespace

BENCHMARK_MAIN();
