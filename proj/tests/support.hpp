#pragma once

#include <random>
#include <vector>

#include "linklabel/graph.hpp"
#include "linklabel/partition.hpp"
#include "oracle/brute_force.hpp"

namespace testing_support {

using linklabel::ClusterId;
using linklabel::Edge;
using linklabel::Label;
using linklabel::NodeId;

// Every ordered pair independently with probability p, uniform labels.
inline std::vector<Edge> random_edges(std::size_t n, std::size_t labels,
                                      double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(labels) - 1);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u != v && coin(rng)) {
        edges.push_back({u, v, static_cast<Label>(pick(rng))});
      }
    }
  }
  return edges;
}

inline std::vector<ClusterId> random_assignment(std::size_t n, std::size_t k,
                                                std::mt19937_64& rng) {
  std::uniform_int_distribution<ClusterId> pick(0, static_cast<ClusterId>(k - 1));
  std::vector<ClusterId> a(n);
  for (auto& c : a) c = pick(rng);
  return a;
}

inline linklabel::SignedGraph make_graph(std::size_t n, std::size_t labels,
                                         const std::vector<Edge>& edges) {
  return linklabel::SignedGraph::from_edges(
      labels == 2 ? linklabel::LabelAlphabet::signs()
                  : linklabel::LabelAlphabet::numbered(labels),
      n, edges);
}

inline oracle::World make_world(std::size_t n, std::size_t labels,
                                const std::vector<Edge>& edges,
                                const std::vector<ClusterId>& assignment = {},
                                std::size_t k = 0) {
  oracle::World w;
  w.nodes = n;
  w.labels = labels;
  for (const Edge& e : edges) w.edges[{e.src, e.dst}] = e.label;
  w.cluster.assign(assignment.begin(), assignment.end());
  w.k = k;
  return w;
}

}  // namespace testing_support
