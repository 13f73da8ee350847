#pragma once

#include <cstdint>
#include <vector>

#include "linklabel/graph.hpp"
#include "linklabel/partition.hpp"

namespace linklabel {

// Cluster-level co-occurrence: entry (s, m, l, n, l2) counts the nodes of
// cluster s that have at least one edge into cluster m labelled l and at
// least one edge into cluster n labelled l2. ANY means "any label" as a set
// union, so summing labelled entries may exceed the ANY entry.
class ClusterCounts {
 public:
  // One pass over the nodes: each node contributes every ordered pair of its
  // distinct (target cluster, label) incidences.
  ClusterCounts(const SignedGraph& graph, const Partition& partition);

  std::size_t k() const { return k_; }

  std::uint32_t count(ClusterId s, ClusterId m, LabelSelector l, ClusterId n,
                      LabelSelector l2) const {
    const std::size_t a = static_cast<std::size_t>(m) * slots_ + l.slot(labels_);
    const std::size_t b = static_cast<std::size_t>(n) * slots_ + l2.slot(labels_);
    return table_[(static_cast<std::size_t>(s) * width_ + a) * width_ + b];
  }

  // Recomputes v's incidences after its out-edges changed. Head clusters are
  // assumed fixed, as in streaming where existing assignments never move.
  void refresh_node(const SignedGraph& graph, const Partition& partition,
                    NodeId v);

  friend bool operator==(const ClusterCounts& a, const ClusterCounts& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_ && a.table_ == b.table_;
  }

 private:
  std::vector<std::uint32_t> incidences(const SignedGraph& graph,
                                        const Partition& partition,
                                        NodeId v) const;
  void apply(ClusterId s, const std::vector<std::uint32_t>& codes, int sign);

  std::size_t k_;
  std::size_t labels_;
  std::size_t slots_;  // labels + ANY
  std::size_t width_;  // k * slots
  std::vector<std::uint32_t> table_;
  std::vector<std::vector<std::uint32_t>> node_incidences_;
  std::vector<ClusterId> node_cluster_;
};

}  // namespace linklabel
