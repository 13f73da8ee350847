#include "linklabel/cluster_counts.hpp"

#include <algorithm>

namespace linklabel {

namespace {

constexpr std::size_t kMaxTableEntries = std::size_t{1} << 28;

}  // namespace

ClusterCounts::ClusterCounts(const SignedGraph& graph,
                             const Partition& partition)
    : k_(partition.k()),
      labels_(graph.label_count()),
      slots_(graph.label_count() + 1),
      width_(partition.k() * (graph.label_count() + 1)) {
  if (partition.node_count() != graph.node_count()) {
    throw ArgumentError("partition does not cover the graph");
  }
  const std::size_t entries = k_ * width_ * width_;
  if (entries / width_ / width_ != k_ || entries > kMaxTableEntries) {
    throw ResourceError("cluster count table too large for k = " +
                        std::to_string(k_));
  }
  table_.assign(entries, 0);
  node_incidences_.resize(graph.node_count());
  node_cluster_ = partition.assignment();
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    node_incidences_[v] = incidences(graph, partition, v);
    apply(partition.cluster_of(v), node_incidences_[v], +1);
  }
}

std::vector<std::uint32_t> ClusterCounts::incidences(
    const SignedGraph& graph, const Partition& partition, NodeId v) const {
  std::vector<std::uint32_t> codes;
  for (const OutEntry& e : graph.out_edges(v)) {
    const std::size_t base =
        static_cast<std::size_t>(partition.cluster_of(e.head)) * slots_;
    codes.push_back(static_cast<std::uint32_t>(base + e.label));
    codes.push_back(static_cast<std::uint32_t>(base + labels_));
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

void ClusterCounts::apply(ClusterId s, const std::vector<std::uint32_t>& codes,
                          int sign) {
  std::uint32_t* plane = table_.data() + static_cast<std::size_t>(s) * width_ * width_;
  for (std::uint32_t a : codes) {
    std::uint32_t* row = plane + static_cast<std::size_t>(a) * width_;
    for (std::uint32_t b : codes) {
      row[b] = static_cast<std::uint32_t>(static_cast<std::int64_t>(row[b]) + sign);
    }
  }
}

void ClusterCounts::refresh_node(const SignedGraph& graph,
                                 const Partition& partition, NodeId v) {
  while (node_incidences_.size() <= v) {
    node_cluster_.push_back(
        partition.cluster_of(static_cast<NodeId>(node_incidences_.size())));
    node_incidences_.emplace_back();
  }
  if (node_cluster_[v] != partition.cluster_of(v)) {
    throw ArgumentError("refresh_node cannot follow a cluster reassignment");
  }
  auto fresh = incidences(graph, partition, v);
  if (fresh == node_incidences_[v]) return;
  apply(node_cluster_[v], node_incidences_[v], -1);
  apply(node_cluster_[v], fresh, +1);
  node_incidences_[v] = std::move(fresh);
}

}  // namespace linklabel
