#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "linklabel/types.hpp"

namespace linklabel {

struct NormalizeReport {
  std::size_t input_edges = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

// Directed multi-label graph with at most one edge per ordered node pair and
// no self-loops. Out-adjacency is sorted by head; for every node and label the
// tail list (the in-neighbours reaching it with that label) is strictly
// sorted, plus one merged ANY list per node. Immutable once built; only the
// streaming model mutates a graph it owns exclusively.
class SignedGraph {
 public:
  SignedGraph() : SignedGraph(LabelAlphabet::signs(), 0) {}
  SignedGraph(LabelAlphabet alphabet, std::size_t node_count);

  // Drops self-loops and collapses duplicate ordered pairs, last one wins.
  static SignedGraph from_edges(LabelAlphabet alphabet, std::size_t node_count,
                                std::span<const Edge> edges,
                                NormalizeReport* report = nullptr);

  std::size_t node_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t label_count() const { return alphabet_.size(); }
  const LabelAlphabet& alphabet() const { return alphabet_; }

  std::span<const OutEntry> out_edges(NodeId u) const { return out_[u]; }
  std::span<const NodeId> in_tails(NodeId u, LabelSelector l) const {
    return in_[static_cast<std::size_t>(u) * (label_count() + 1) +
               l.slot(label_count())];
  }
  std::size_t out_degree(NodeId u) const { return out_[u].size(); }
  std::size_t in_degree(NodeId u) const { return in_tails(u, kAny).size(); }

  std::optional<Label> label_of(NodeId src, NodeId dst) const;

  // All edges ordered by (src, dst).
  std::vector<Edge> edges() const;
  std::vector<std::size_t> label_counts() const;

  // A graph over the same node universe and external ids with a new edge set.
  SignedGraph with_edges(std::span<const Edge> edges) const;

  void set_external_ids(std::vector<std::string> ids);
  bool has_external_ids() const { return !external_ids_.empty(); }
  // Falls back to the decimal dense id when no external ids are attached.
  std::string external_id(NodeId u) const;
  std::optional<NodeId> find_node(std::string_view external_id) const;

  // Full cross-scan of the out/in adjacency; true when every invariant holds.
  bool check_consistency() const;

  friend bool operator==(const SignedGraph& a, const SignedGraph& b);

 private:
  friend class StreamingModel;

  NodeId add_node(std::string external_id);
  // Inserts or relabels src->dst; returns the previous label if any.
  std::optional<Label> upsert_edge(const Edge& e);

  std::vector<NodeId>& tails_mut(NodeId u, std::size_t slot) {
    return in_[static_cast<std::size_t>(u) * (label_count() + 1) + slot];
  }

  LabelAlphabet alphabet_;
  std::vector<std::vector<OutEntry>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> external_ids_;
  std::unordered_map<std::string, NodeId> external_index_;
};

// Keeps exactly round(density * edge_count) uniformly chosen edges; nodes are
// never removed or renumbered.
SignedGraph sparsify(const SignedGraph& graph, double density,
                     std::uint64_t seed);

struct PredictionQuery {
  NodeId initiator = 0;
  NodeId receiver = 0;
};

void validate_query(const SignedGraph& graph, PredictionQuery query);

// The initiator's labelled out-edges other than the one to the receiver,
// each weighted uniformly.
struct Context {
  std::vector<OutEntry> entries;
  std::vector<double> weights;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

Context context_of(const SignedGraph& graph, PredictionQuery query);

}  // namespace linklabel
