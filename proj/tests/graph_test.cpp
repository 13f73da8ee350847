#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "linklabel/graph.hpp"
#include "linklabel/io.hpp"
#include "linklabel/planted.hpp"
#include "support.hpp"

using namespace linklabel;
using testing_support::make_graph;
using testing_support::random_edges;

namespace {

LoadedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

}  // namespace

TEST(LabelAlphabet, RejectsTooFewOrRepeatedLabels) {
  EXPECT_THROW(LabelAlphabet({"+"}), ArgumentError);
  EXPECT_THROW(LabelAlphabet({"a", "b", "a"}), ArgumentError);
  EXPECT_EQ(LabelAlphabet::numbered(3).name(2), "2");
  EXPECT_EQ(LabelAlphabet::signs().find("-"), Label{1});
}

TEST(SignedGraph, LastDuplicateWinsAndSelfLoopsAreDropped) {
  NormalizeReport rep;
  const std::vector<Edge> edges = {{0, 1, 0}, {1, 1, 0}, {0, 1, 1}, {2, 0, 0}};
  const SignedGraph g = SignedGraph::from_edges(LabelAlphabet::signs(), 3, edges, &rep);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.label_of(0, 1), Label{1});
  EXPECT_EQ(rep.self_loops_dropped, 1u);
  EXPECT_EQ(rep.duplicates_collapsed, 1u);
  EXPECT_TRUE(g.check_consistency());
}

TEST(SignedGraph, TailListsMatchBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 25, labels = 2 + trial % 2;
    const auto edges = random_edges(n, labels, 0.2, rng);
    const SignedGraph g = make_graph(n, labels, edges);
    ASSERT_TRUE(g.check_consistency());
    std::size_t total = 0;
    for (NodeId u = 0; u < n; ++u) {
      std::size_t sum = 0;
      for (Label l = 0; l < labels; ++l) {
        auto t = g.in_tails(u, l);
        EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
        EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
        std::size_t brute = 0;
        for (const Edge& e : edges) brute += (e.dst == u && e.label == l);
        EXPECT_EQ(t.size(), brute);
        sum += t.size();
      }
      EXPECT_EQ(sum, g.in_tails(u, kAny).size());
      total += g.out_degree(u);
    }
    EXPECT_EQ(total, g.edge_count());
  }
}

TEST(Context, ExcludesTheReceiver) {
  // initiator 0 with out-edges x=1 (+), y=2 (-), j=3 (+)
  const SignedGraph g = SignedGraph::from_edges(
      LabelAlphabet::signs(), 4, std::vector<Edge>{{0, 1, 0}, {0, 2, 1}, {0, 3, 0}});
  const Context c = context_of(g, {0, 3});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.entries[0], (OutEntry{1, 0}));
  EXPECT_EQ(c.entries[1], (OutEntry{2, 1}));
  EXPECT_DOUBLE_EQ(c.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(c.weights[1], 0.5);

  EXPECT_TRUE(context_of(g, {1, 0}).empty());  // isolated initiator
  const SignedGraph only = SignedGraph::from_edges(
      LabelAlphabet::signs(), 2, std::vector<Edge>{{0, 1, 0}});
  EXPECT_TRUE(context_of(only, {0, 1}).empty());
  EXPECT_THROW(context_of(g, {2, 2}), ArgumentError);
  EXPECT_THROW(context_of(g, {0, 9}), ArgumentError);
}

TEST(Sparsify, KeepsRoundedShareOfEdges) {
  std::mt19937_64 rng(11);
  const auto edges = random_edges(30, 2, 0.12, rng);
  const SignedGraph g = make_graph(30, 2, edges);
  for (double d : {0.05, 0.1, 0.25, 0.333, 0.5, 0.77, 1.0}) {
    const SignedGraph s = sparsify(g, d, 3);
    EXPECT_EQ(s.edge_count(),
              static_cast<std::size_t>(std::llround(d * static_cast<double>(g.edge_count()))));
    EXPECT_EQ(s.node_count(), g.node_count());
    for (const Edge& e : s.edges()) EXPECT_EQ(g.label_of(e.src, e.dst), e.label);
    EXPECT_EQ(s, sparsify(g, d, 3));
  }
  EXPECT_EQ(sparsify(g, 1.0, 9), g);
  EXPECT_THROW(sparsify(g, 0.0, 1), ArgumentError);
  EXPECT_THROW(sparsify(g, 1.5, 1), ArgumentError);
}

TEST(Sparsify, HundredEdgesAtTenPercent) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= 100; ++v) edges.push_back({0, v, static_cast<Label>(v % 2)});
  const SignedGraph g = make_graph(101, 2, edges);
  const SignedGraph s = sparsify(g, 0.1, 42);
  EXPECT_EQ(s.edge_count(), 10u);
  EXPECT_EQ(s.node_count(), 101u);
}

TEST(Planted, DeterministicAndPureWithoutNoise) {
  PlantedOptions o;
  o.seed = 7;
  const PlantedGraph a = generate_planted(o);
  const PlantedGraph b = generate_planted(o);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.roles, b.roles);
  const Partition truth(a.graph, a.roles, a.n_roles);
  EXPECT_EQ(truth.objective(), 0.0);
  for (const Edge& e : a.graph.edges()) {
    EXPECT_EQ(e.label, a.table_label(a.roles[e.src], a.roles[e.dst]));
  }
}

TEST(Planted, FullNoiseFlipsEveryLabelAndStaysPure) {
  PlantedOptions o;
  o.noise = 1.0;
  o.seed = 3;
  const PlantedGraph p = generate_planted(o);
  for (const Edge& e : p.graph.edges()) {
    EXPECT_NE(e.label, p.table_label(p.roles[e.src], p.roles[e.dst]));
  }
  EXPECT_EQ(Partition(p.graph, p.roles, p.n_roles).objective(), 0.0);
}

TEST(Planted, RejectsMoreRolesThanNodes) {
  PlantedOptions o;
  o.n_nodes = 2;
  o.n_roles = 3;
  EXPECT_THROW(generate_planted(o), ArgumentError);
  o.n_roles = 1;
  EXPECT_THROW(generate_planted(o), ArgumentError);
}

TEST(EdgeList, DuplicatePairKeepsLastLabel) {
  const LoadedGraph g = parse("a b +1\na b -1\n");
  EXPECT_EQ(g.graph.edge_count(), 1u);
  EXPECT_EQ(g.graph.label_of(0, 1), Label{1});
  EXPECT_EQ(g.report.duplicates_collapsed, 1u);
  EXPECT_EQ(g.report.data_lines, 2u);
  EXPECT_EQ(g.report.raw_label_counts, (std::vector<std::size_t>{1, 1}));
}

TEST(EdgeList, EmptyInput) {
  const LoadedGraph g = parse("");
  EXPECT_EQ(g.graph.node_count(), 0u);
  EXPECT_EQ(g.graph.edge_count(), 0u);
}

TEST(EdgeList, SignTokensAndComments) {
  const LoadedGraph g = parse("# header\n1 2 1\n2 3 +\n3 1 -\n\n1 3 -1\n4 4 1\n");
  EXPECT_EQ(g.graph.edge_count(), 4u);
  EXPECT_EQ(g.report.self_loops_dropped, 1u);
  EXPECT_EQ(g.report.comment_lines, 1u);
  EXPECT_EQ(g.graph.node_count(), 4u);  // the self-loop node is still a node
  EXPECT_EQ(g.graph.label_of(*g.graph.find_node("3"), *g.graph.find_node("1")),
            Label{1});
}

TEST(EdgeList, NumericIdsKeepNumericOrder) {
  const LoadedGraph g = parse("10 9 1\n100 2 -1\n");
  EXPECT_EQ(g.graph.find_node("2"), NodeId{0});
  EXPECT_EQ(g.graph.find_node("9"), NodeId{1});
  EXPECT_EQ(g.graph.find_node("10"), NodeId{2});
  EXPECT_EQ(g.graph.find_node("100"), NodeId{3});
}

TEST(EdgeList, MalformedLinesNameTheLine) {
  try {
    parse("1 2 1\n1 2\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse("# c\n1 2 1\n3 4 maybe\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("maybe"), std::string::npos);
  }
  EXPECT_THROW(parse("1 2 1 7\n"), ParseError);
  EXPECT_THROW(load_edge_list("/nonexistent/graph.txt"), IoError);
}

TEST(EdgeList, RoundTripIsExact) {
  const LoadedGraph g = parse("u v 1\nv w -1\nw u 1\nz v -1\n# node lonely\n");
  std::ostringstream out;
  write_edge_list(out, g.graph);
  const LoadedGraph back = parse(out.str());
  EXPECT_EQ(back.graph, g.graph);
  EXPECT_EQ(back.graph.node_count(), 5u);

  std::mt19937_64 rng(2);
  const SignedGraph r = make_graph(20, 2, random_edges(20, 2, 0.1, rng));
  std::ostringstream out2;
  write_edge_list(out2, r);
  const LoadedGraph r2 = parse(out2.str());
  EXPECT_EQ(r2.graph.edges(), r.edges());
  EXPECT_EQ(r2.graph.node_count(), r.node_count());
}

TEST(EdgeList, MultiLabelAlphabet) {
  const LoadOptions o = LoadOptions::named(LabelAlphabet({"a", "b", "c"}));
  std::istringstream in("1 2 a\n2 3 c\n3 1 b\n");
  const LoadedGraph g = parse_edge_list(in, o);
  EXPECT_EQ(g.graph.label_count(), 3u);
  EXPECT_EQ(g.graph.label_counts(), (std::vector<std::size_t>{1, 1, 1}));
  std::ostringstream out;
  write_edge_list(out, g.graph, o);
  std::istringstream again(out.str());
  EXPECT_EQ(parse_edge_list(again, o).graph, g.graph);
}

TEST(Stats, SharesAndDigest) {
  const LoadedGraph g = parse("1 2 1\n2 3 1\n3 1 -1\n1 3 1\n");
  const GraphStats s = compute_stats(g.graph);
  EXPECT_EQ(s.node_count, 3u);
  EXPECT_EQ(s.edge_count, 4u);
  EXPECT_DOUBLE_EQ(s.label_shares[0], 0.75);

  const auto path = std::filesystem::temp_directory_path() / "linklabel_digest.txt";
  std::ofstream(path, std::ios::binary) << "abc";
  EXPECT_EQ(file_digest(path),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(path);
}
