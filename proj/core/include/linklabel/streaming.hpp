#pragma once

#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "linklabel/cluster_counts.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/graph.hpp"
#include "linklabel/partition.hpp"

namespace linklabel {

struct ExternalEdge {
  std::string src;
  std::string dst;
  Label label = 0;
};

struct StreamOptions {
  // Unknown node ids create new nodes; when false they are an error.
  bool auto_intern = true;
  NamBuildOptions nam;
};

struct BatchReport {
  std::size_t inserted = 0;
  std::size_t relabeled = 0;
  std::size_t unchanged = 0;
  std::size_t self_loops_dropped = 0;
  // New nodes and the cluster each was placed in.
  std::vector<std::pair<NodeId, ClusterId>> new_nodes;
};

// Owns a graph together with its precomputed co-occurrence table, partition
// counts and cluster counts, and keeps all four exactly equal to a rebuild
// from scratch as edge batches arrive. A batch holds the write lock for its
// whole duration, so readers see either the state before it or after it.
//
// New nodes go to the cluster that minimizes the objective increase caused
// by their batch edges towards already placed nodes; nodes without such
// edges go to the largest cluster. Existing assignments never change.
class StreamingModel {
 public:
  StreamingModel(SignedGraph graph, Partition partition,
                 StreamOptions options = {});

  StreamingModel(const StreamingModel&) = delete;
  StreamingModel& operator=(const StreamingModel&) = delete;

  // Dense ids; ids at or beyond node_count() name new nodes.
  BatchReport apply_edge_batch(std::span<const Edge> edges);
  BatchReport apply_edge_batch(std::span<const ExternalEdge> edges);

  // Runs `fn(graph, nam, partition, cluster_counts)` under the read lock.
  template <class Fn>
  decltype(auto) read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(graph_, nam_, partition_, cam_);
  }

  // Unsynchronized accessors for single-threaded callers.
  const SignedGraph& graph() const { return graph_; }
  const CooccurrenceCounts& nam() const { return nam_; }
  const Partition& partition() const { return partition_; }
  const ClusterCounts& cluster_counts() const { return cam_; }

 private:
  BatchReport apply_locked(std::span<const Edge> edges, std::size_t new_nodes,
                           std::vector<std::string> new_ids);
  ClusterId place_new_node(NodeId v, std::span<const Edge> edges) const;
  void upsert(const Edge& e, BatchReport& report);

  StreamOptions options_;
  SignedGraph graph_;
  CooccurrenceCounts nam_;
  Partition partition_;
  ClusterCounts cam_;
  mutable std::shared_mutex mutex_;
};

}  // namespace linklabel
