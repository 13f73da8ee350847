#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linklabel/graph.hpp"

namespace linklabel {

// Size of the intersection of two strictly sorted id lists.
std::size_t intersect_count(std::span<const NodeId> a, std::span<const NodeId> b);

// |T(m, l) ∩ T(n, l2)|: how many nodes point at m with label l and at n with
// label l2, by merging the sorted tail lists.
std::uint64_t nam_count(const SignedGraph& graph, NodeId m, LabelSelector l,
                        NodeId n, LabelSelector l2);

struct NamKey {
  NodeId m = 0;
  NodeId n = 0;
  std::uint8_t l = 0;   // label or LabelSelector::kAnyCode
  std::uint8_t l2 = 0;

  friend bool operator==(const NamKey&, const NamKey&) = default;
  friend auto operator<=>(const NamKey& a, const NamKey& b) {
    if (auto c = a.m <=> b.m; c != 0) return c;
    if (auto c = a.l <=> b.l; c != 0) return c;
    if (auto c = a.n <=> b.n; c != 0) return c;
    return a.l2 <=> b.l2;
  }
};

struct NamKeyHash {
  std::size_t operator()(const NamKey& k) const noexcept;
};

using NodeFilter = std::function<bool(NodeId)>;

struct NamBuildOptions {
  // Maximum number of out-edge pairs the build may enumerate.
  std::uint64_t budget = 200'000'000;
  bool override_budget = false;
  // When set, only keys whose two heads both pass are materialized; lookups
  // outside the filter fall back to the sorted-list intersection.
  NodeFilter node_filter;
};

// Σ over tails of (filtered out-degree)^2: the pair enumeration cost of a
// precomputed table.
std::uint64_t projected_nam_cost(const SignedGraph& graph,
                                 const NodeFilter& filter = {});

// Node-level co-occurrence counts, either computed on demand from the graph's
// tail lists or looked up in a precomputed sparse table.
class CooccurrenceCounts {
 public:
  enum class Strategy { kOnDemand, kPrecomputed };

  explicit CooccurrenceCounts(const SignedGraph& graph)
      : graph_(&graph), strategy_(Strategy::kOnDemand) {}

  // Enumerates every ordered pair of out-edges of every tail. Throws
  // ResourceError when the projected cost exceeds the budget.
  static CooccurrenceCounts precompute(const SignedGraph& graph,
                                       const NamBuildOptions& options = {});

  Strategy strategy() const { return strategy_; }
  const SignedGraph& graph() const { return *graph_; }

  std::uint64_t count(NodeId m, LabelSelector l, NodeId n,
                      LabelSelector l2) const;

  std::size_t entry_count() const { return table_.size(); }
  std::vector<std::pair<NamKey, std::uint32_t>> sorted_entries() const;

  // Maintenance hooks for streaming: `others` are the tail's out-edges other
  // than `edge`. Adding then retracting the same edge restores the table.
  void add_tail_edge(OutEntry edge, std::span<const OutEntry> others);
  void retract_tail_edge(OutEntry edge, std::span<const OutEntry> others);

  bool same_table(const CooccurrenceCounts& other) const {
    return table_ == other.table_;
  }

  // Binary snapshot: sorted keys, little-endian, versioned header.
  void write_snapshot(std::ostream& out) const;
  static CooccurrenceCounts read_snapshot(std::istream& in,
                                          const SignedGraph& graph);

 private:
  CooccurrenceCounts(const SignedGraph& graph, Strategy strategy)
      : graph_(&graph), strategy_(strategy) {}

  bool materialized(NodeId m, NodeId n) const {
    return !filter_ || (filter_(m) && filter_(n));
  }
  void bump_pair(OutEntry a, OutEntry b, int delta);
  void bump(const NamKey& key, int delta);

  const SignedGraph* graph_;
  Strategy strategy_;
  NodeFilter filter_;
  std::unordered_map<NamKey, std::uint32_t, NamKeyHash> table_;
};

}  // namespace linklabel
