#include "linklabel/streaming.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace linklabel {

StreamingModel::StreamingModel(SignedGraph graph, Partition partition,
                               StreamOptions options)
    : options_(std::move(options)),
      graph_(std::move(graph)),
      nam_(CooccurrenceCounts::precompute(graph_, options_.nam)),
      partition_(std::move(partition)),
      cam_(graph_, partition_) {
  if (!partition_.counts_match(graph_)) {
    throw ArgumentError("partition does not match the graph");
  }
}

BatchReport StreamingModel::apply_edge_batch(std::span<const Edge> edges) {
  std::unique_lock lock(mutex_);
  std::size_t limit = graph_.node_count();
  for (const Edge& e : edges) {
    if (e.label >= graph_.label_count()) {
      throw ArgumentError("batch edge label out of range");
    }
    limit = std::max<std::size_t>(limit, std::max(e.src, e.dst) + std::size_t{1});
  }
  const std::size_t new_nodes = limit - graph_.node_count();
  if (new_nodes > 0) {
    if (!options_.auto_intern) {
      throw ArgumentError("batch names unknown nodes and auto-intern is off");
    }
    if (graph_.has_external_ids()) {
      throw ArgumentError("graph has external ids; stream external edges");
    }
  }
  return apply_locked(edges, new_nodes, {});
}

BatchReport StreamingModel::apply_edge_batch(
    std::span<const ExternalEdge> edges) {
  std::unique_lock lock(mutex_);
  std::vector<std::string> new_ids;
  std::unordered_map<std::string, NodeId> fresh;
  auto resolve = [&](const std::string& id) -> NodeId {
    if (auto v = graph_.find_node(id)) return *v;
    auto it = fresh.find(id);
    if (it != fresh.end()) return it->second;
    if (!options_.auto_intern) {
      throw ArgumentError("unknown external id '" + id + "'");
    }
    const auto v = static_cast<NodeId>(graph_.node_count() + new_ids.size());
    fresh.emplace(id, v);
    new_ids.push_back(id);
    return v;
  };
  std::vector<Edge> dense;
  dense.reserve(edges.size());
  for (const ExternalEdge& e : edges) {
    if (e.label >= graph_.label_count()) {
      throw ArgumentError("batch edge label out of range");
    }
    const NodeId src = resolve(e.src);
    const NodeId dst = resolve(e.dst);
    dense.push_back({src, dst, e.label});
  }
  if (!new_ids.empty() && !graph_.has_external_ids() &&
      graph_.node_count() > 0) {
    throw ArgumentError("graph has no external ids; stream dense edges");
  }
  const std::size_t n_new = new_ids.size();
  return apply_locked(dense, n_new, std::move(new_ids));
}

BatchReport StreamingModel::apply_locked(std::span<const Edge> edges,
                                         std::size_t new_nodes,
                                         std::vector<std::string> new_ids) {
  BatchReport report;
  for (std::size_t i = 0; i < new_nodes; ++i) {
    const NodeId v = graph_.add_node(new_ids.empty() ? std::string()
                                                     : std::move(new_ids[i]));
    const ClusterId c = place_new_node(v, edges);
    partition_.add_node(c);
    report.new_nodes.emplace_back(v, c);
  }
  for (const Edge& e : edges) {
    if (e.src == e.dst) {
      ++report.self_loops_dropped;
      continue;
    }
    upsert(e, report);
  }
  return report;
}

ClusterId StreamingModel::place_new_node(NodeId v,
                                         std::span<const Edge> edges) const {
  // Last label per neighbour and direction, towards already placed nodes.
  std::map<std::pair<NodeId, bool>, Label> incident;
  for (const Edge& e : edges) {
    if (e.src == e.dst) continue;
    if (e.src == v && e.dst < v) {
      incident[{e.dst, true}] = e.label;
    } else if (e.dst == v && e.src < v) {
      incident[{e.src, false}] = e.label;
    }
  }
  if (incident.empty()) return partition_.largest_cluster();

  const std::size_t k = partition_.k();
  const std::size_t labels = partition_.label_count();
  std::vector<std::uint64_t> histogram(labels);
  double best_delta = 0.0;
  ClusterId best = 0;
  for (ClusterId c = 0; c < k; ++c) {
    // (cluster pair, label) increments if v joined c.
    std::map<std::pair<ClusterId, ClusterId>, std::vector<std::uint64_t>> adds;
    for (const auto& [key, label] : incident) {
      const ClusterId other = partition_.cluster_of(key.first);
      auto pair = key.second ? std::make_pair(c, other) : std::make_pair(other, c);
      auto& add = adds[pair];
      add.resize(labels, 0);
      ++add[label];
    }
    double delta = 0.0;
    for (const auto& [pair, add] : adds) {
      for (std::size_t l = 0; l < labels; ++l) {
        histogram[l] = partition_.pair_count(pair.first, pair.second,
                                             static_cast<Label>(l));
      }
      const double before = weighted_entropy(histogram);
      for (std::size_t l = 0; l < labels; ++l) histogram[l] += add[l];
      delta += weighted_entropy(histogram) - before;
    }
    if (c == 0 || delta < best_delta - 1e-9) {
      best_delta = delta;
      best = c;
    }
  }
  return best;
}

void StreamingModel::upsert(const Edge& e, BatchReport& report) {
  const std::optional<Label> old = graph_.label_of(e.src, e.dst);
  if (old == e.label) {
    ++report.unchanged;
    return;
  }
  std::vector<OutEntry> others;
  for (const OutEntry& o : graph_.out_edges(e.src)) {
    if (o.head != e.dst) others.push_back(o);
  }
  if (old) {
    nam_.retract_tail_edge({e.dst, *old}, others);
    partition_.remove_edge({e.src, e.dst, *old});
    ++report.relabeled;
  } else {
    ++report.inserted;
  }
  graph_.upsert_edge(e);
  nam_.add_tail_edge({e.dst, e.label}, others);
  partition_.add_edge(e);
  cam_.refresh_node(graph_, partition_, e.src);
}

}  // namespace linklabel
