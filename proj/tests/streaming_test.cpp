#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <sstream>
#include <thread>

#include "linklabel/io.hpp"
#include "linklabel/streaming.hpp"
#include "support.hpp"

using namespace linklabel;
using testing_support::make_graph;
using testing_support::random_assignment;
using testing_support::random_edges;

namespace {

// Rebuilds every structure from the model's graph and assignment.
void expect_matches_rebuild(const StreamingModel& m) {
  const SignedGraph& g = m.graph();
  ASSERT_TRUE(g.check_consistency());
  const CooccurrenceCounts nam = CooccurrenceCounts::precompute(g);
  EXPECT_TRUE(nam.same_table(m.nam()));
  const Partition p(g, m.partition().assignment(), m.partition().k());
  EXPECT_EQ(p, m.partition());
  EXPECT_EQ(ClusterCounts(g, p), m.cluster_counts());
}

}  // namespace

TEST(Streaming, SplitThenBatchEqualsFullBuild) {
  std::mt19937_64 rng(2024);
  for (int split = 0; split < 20; ++split) {
    const std::size_t n = 30, labels = 2 + split % 2, k = 4;
    auto edges = random_edges(n, labels, 0.15, rng);
    std::shuffle(edges.begin(), edges.end(), rng);
    const std::size_t head = edges.size() * 7 / 10;
    const std::vector<Edge> first(edges.begin(), edges.begin() + head);
    const std::vector<Edge> tail(edges.begin() + head, edges.end());

    const SignedGraph g = make_graph(n, labels, first);
    const auto assignment = random_assignment(n, k, rng);
    StreamingModel model(g, Partition(g, assignment, k));
    const BatchReport rep = model.apply_edge_batch(std::span(tail));
    EXPECT_EQ(rep.inserted, tail.size());

    const SignedGraph full = make_graph(n, labels, edges);
    EXPECT_EQ(model.graph(), full);
    EXPECT_TRUE(CooccurrenceCounts::precompute(full).same_table(model.nam()));
    const Partition p(full, assignment, k);
    EXPECT_EQ(model.partition(), p);
    EXPECT_EQ(model.cluster_counts(), ClusterCounts(full, p));
  }
}

TEST(Streaming, RelabelsNewNodesAndSelfLoops) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 20, k = 3;
    const auto edges = random_edges(n, 2, 0.2, rng);
    const SignedGraph g = make_graph(n, 2, edges);
    StreamingModel model(g, Partition(g, random_assignment(n, k, rng), k));
    for (int batch = 0; batch < 4; ++batch) {
      std::vector<Edge> b;
      std::uniform_int_distribution<NodeId> node(
          0, static_cast<NodeId>(model.graph().node_count() + 2));
      for (int e = 0; e < 25; ++e) {
        b.push_back({node(rng), node(rng), static_cast<Label>(rng() % 2)});
      }
      model.apply_edge_batch(std::span(b));
      expect_matches_rebuild(model);
    }
  }
}

TEST(Streaming, EmptyAndRepeatedBatchesChangeNothing) {
  std::mt19937_64 rng(3);
  const auto edges = random_edges(15, 2, 0.2, rng);
  const SignedGraph g = make_graph(15, 2, edges);
  StreamingModel model(g, Partition(g, random_assignment(15, 3, rng), 3));
  const std::vector<Edge> none;
  model.apply_edge_batch(std::span(none));
  EXPECT_EQ(model.graph(), g);
  const BatchReport rep = model.apply_edge_batch(std::span(edges));
  EXPECT_EQ(rep.unchanged, edges.size());
  EXPECT_EQ(rep.inserted + rep.relabeled, 0u);
  EXPECT_EQ(model.graph(), g);
  expect_matches_rebuild(model);
}

TEST(Streaming, ExternalIdsAndAutoIntern) {
  std::istringstream in("a b 1\nb c -1\nc a 1\na c 1\n");
  LoadedGraph loaded = parse_edge_list(in);
  const SignedGraph g = loaded.graph;
  std::vector<ClusterId> a(g.node_count(), 0);
  a[1] = 1;
  StreamingModel model(g, Partition(g, a, 2));
  const std::vector<ExternalEdge> batch = {{"d", "a", 0}, {"d", "b", 1}, {"b", "a", 1}};
  const BatchReport rep = model.apply_edge_batch(std::span(batch));
  ASSERT_EQ(rep.new_nodes.size(), 1u);
  EXPECT_EQ(model.graph().external_id(rep.new_nodes[0].first), "d");
  EXPECT_EQ(model.graph().node_count(), 4u);
  expect_matches_rebuild(model);

  StreamOptions strict;
  strict.auto_intern = false;
  StreamingModel closed(g, Partition(g, a, 2), strict);
  const std::vector<ExternalEdge> unknown = {{"zz", "a", 0}};
  EXPECT_THROW(closed.apply_edge_batch(std::span(unknown)), ArgumentError);
  EXPECT_EQ(closed.graph(), g);
}

TEST(Streaming, NewNodeJoinsTheCheapestCluster) {
  // Cluster 0 = {0, 1}, cluster 1 = {2, 3}. Edges 0->2, 1->3 are '+',
  // 2->0, 3->1 are '-'. A newcomer sending '-' to node 0 and receiving '+'
  // from it mixes labels inside cluster 0 but fits cluster 1 exactly.
  const SignedGraph g = make_graph(
      4, 2, std::vector<Edge>{{0, 2, 0}, {1, 3, 0}, {2, 0, 1}, {3, 1, 1}});
  StreamingModel model(g, Partition(g, {0, 0, 1, 1}, 2));
  const std::vector<Edge> batch = {{4, 0, 1}, {0, 4, 0}};
  const BatchReport rep = model.apply_edge_batch(std::span(batch));
  ASSERT_EQ(rep.new_nodes.size(), 1u);
  EXPECT_EQ(rep.new_nodes[0].second, 1u);
  EXPECT_EQ(model.partition().objective(), 0.0);

  // A node with no edges goes to the largest cluster (lowest id on ties).
  const std::vector<Edge> loner = {{5, 5, 0}};
  const BatchReport rep2 = model.apply_edge_batch(std::span(loner));
  EXPECT_EQ(rep2.self_loops_dropped, 1u);
  ASSERT_EQ(rep2.new_nodes.size(), 1u);
  EXPECT_EQ(rep2.new_nodes[0].second, 1u);
}

TEST(Streaming, ReadersNeverSeeAHalfAppliedBatch) {
  std::mt19937_64 rng(99);
  const std::size_t n = 40;
  const SignedGraph g = make_graph(n, 2, random_edges(n, 2, 0.05, rng));
  StreamingModel model(g, Partition(g, random_assignment(n, 4, rng), 4));
  std::vector<std::vector<Edge>> batches;
  for (int b = 0; b < 30; ++b) batches.push_back(random_edges(n, 2, 0.01, rng));

  std::atomic<bool> done{false};
  std::atomic<int> torn{0};
  std::thread reader([&] {
    while (!done) {
      model.read([&](const SignedGraph& graph, const CooccurrenceCounts& nam,
                     const Partition& p, const ClusterCounts&) {
        std::uint64_t total = 0;
        for (ClusterId c = 0; c < p.k(); ++c) {
          for (ClusterId d = 0; d < p.k(); ++d) total += p.pair_total(c, d);
        }
        std::uint64_t self = 0;
        for (NodeId v = 0; v < graph.node_count(); ++v) {
          self += nam.count(v, kAny, v, kAny);
        }
        if (total != graph.edge_count() || self != graph.edge_count()) ++torn;
      });
    }
  });
  for (const auto& b : batches) model.apply_edge_batch(std::span(b));
  done = true;
  reader.join();
  EXPECT_EQ(torn.load(), 0);
  expect_matches_rebuild(model);
}

TEST(Streaming, SnapshotAfterUpdatesMatchesRebuild) {
  std::mt19937_64 rng(5);
  const SignedGraph g = make_graph(20, 3, random_edges(20, 3, 0.1, rng));
  StreamingModel model(g, Partition(g, random_assignment(20, 2, rng), 2));
  const auto more = random_edges(20, 3, 0.05, rng);
  model.apply_edge_batch(std::span(more));
  std::ostringstream a, b;
  model.nam().write_snapshot(a);
  CooccurrenceCounts::precompute(model.graph()).write_snapshot(b);
  EXPECT_EQ(a.str(), b.str());
}
