#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "linklabel/graph.hpp"

namespace linklabel {

// N·log2(N) − Σ n·log2(n) over a label histogram with N = Σ n: the number of
// edges in a cluster pair times the label entropy of that pair, in bits.
double weighted_entropy(std::span<const std::uint64_t> label_counts);

// Node-to-cluster map plus, for every ordered cluster pair, the histogram of
// labels on the edges running between them.
class Partition {
 public:
  Partition(const SignedGraph& graph, std::vector<ClusterId> assignment,
            std::size_t k);

  std::size_t k() const { return k_; }
  std::size_t node_count() const { return assignment_.size(); }
  std::size_t label_count() const { return labels_; }

  ClusterId cluster_of(NodeId v) const { return assignment_[v]; }
  const std::vector<ClusterId>& assignment() const { return assignment_; }

  std::uint64_t pair_count(ClusterId c, ClusterId d, Label l) const {
    return pair_label_[pair_index(c, d) * labels_ + l];
  }
  std::uint64_t pair_total(ClusterId c, ClusterId d) const {
    return pair_total_[pair_index(c, d)];
  }
  std::size_t cluster_size(ClusterId c) const { return sizes_[c]; }
  // Lowest id among the clusters of maximal size.
  ClusterId largest_cluster() const;

  // Σ over cluster pairs of pair_total · H(label distribution), in bits.
  double objective() const;

  // φ(after moving v to `to`) − φ(now), touching only v's incident pairs.
  double delta_objective(const SignedGraph& graph, NodeId v,
                         ClusterId to) const;

  void move(const SignedGraph& graph, NodeId v, ClusterId to);

  // Recounts every pair from the assignment and compares.
  bool counts_match(const SignedGraph& graph) const;

  // Streaming maintenance.
  void add_node(ClusterId c);
  void add_edge(const Edge& e);
  void remove_edge(const Edge& e);

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  friend class MoveEvaluator;

  std::size_t pair_index(ClusterId c, ClusterId d) const {
    return static_cast<std::size_t>(c) * k_ + d;
  }
  void bump(ClusterId c, ClusterId d, Label l, std::int64_t delta);

  std::size_t k_;
  std::size_t labels_;
  std::vector<ClusterId> assignment_;
  std::vector<std::uint64_t> pair_label_;
  std::vector<std::uint64_t> pair_total_;
  std::vector<std::size_t> sizes_;
};

// Evaluates Δφ of moving one node to every candidate cluster. Aggregates the
// node's in/out edges by (neighbour cluster, label) once, then each candidate
// costs O(number of distinct neighbour clusters).
class MoveEvaluator {
 public:
  MoveEvaluator(const SignedGraph& graph, const Partition& partition);

  void load(NodeId v);
  double delta(ClusterId to) const;
  void all_deltas(std::span<double> out) const;

 private:
  struct Change {
    std::size_t pair;
    Label label;
    std::int64_t delta;
  };

  const SignedGraph& graph_;
  const Partition& partition_;
  NodeId node_ = 0;
  ClusterId from_ = 0;
  // (cluster * labels + label, count) for edges leaving / entering the node.
  std::vector<std::pair<std::size_t, std::int64_t>> out_profile_;
  std::vector<std::pair<std::size_t, std::int64_t>> in_profile_;
  std::vector<std::int64_t> scratch_;
  std::vector<std::size_t> touched_;
  mutable std::vector<Change> changes_;
  mutable std::vector<std::uint64_t> histogram_;
};

void save_partition(const std::filesystem::path& path,
                    const SignedGraph& graph, const Partition& partition);
// Lines of `node_id cluster_id`; every node of the graph must be listed.
Partition load_partition(const std::filesystem::path& path,
                         const SignedGraph& graph);

}  // namespace linklabel
