#include "linklabel/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace linklabel {

namespace {

// Deltas closer than this are treated as equal when picking the best move.
constexpr double kDeltaTolerance = 1e-9;

}  // namespace

void ClusterConfig::validate() const {
  if (k == 0) throw ArgumentError("cluster count must be at least 1");
  if (max_sweeps == 0) throw ArgumentError("max_sweeps must be at least 1");
  if (restarts == 0) throw ArgumentError("restarts must be at least 1");
  if (!greedy && !(temperature > 0.0)) {
    throw ArgumentError("temperature must be positive unless greedy");
  }
  if (!(early_stop_rel_tol >= 0.0)) {
    throw ArgumentError("early_stop_rel_tol must be non-negative");
  }
}

std::size_t sample_boltzmann(std::span<const double> deltas,
                             double temperature, Rng& rng) {
  const double best = *std::min_element(deltas.begin(), deltas.end());
  double total = 0.0;
  std::vector<double> weights(deltas.size());
  for (std::size_t c = 0; c < deltas.size(); ++c) {
    weights[c] = std::exp(-(deltas[c] - best) / temperature);
    total += weights[c];
  }
  double u = rng.uniform() * total;
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (u < weights[c]) return c;
    u -= weights[c];
  }
  // Rounding left u just past the end; fall back to the last positive weight.
  for (std::size_t c = weights.size(); c-- > 0;) {
    if (weights[c] > 0.0) return c;
  }
  return 0;
}

std::size_t gibbs_sweep(const SignedGraph& graph, Partition& partition,
                        const ClusterConfig& config, Rng& rng) {
  const std::size_t n = graph.node_count();
  const std::size_t k = partition.k();
  if (k == 1 || n == 0) return 0;
  MoveEvaluator eval(graph, partition);
  std::vector<double> deltas(k);
  std::size_t moves = 0;
  for (std::size_t step = 0; step < n; ++step) {
    const auto v = static_cast<NodeId>(
        config.scan == ScanOrder::kRandom ? rng.below(n) : step);
    eval.load(v);
    eval.all_deltas(deltas);
    const ClusterId current = partition.cluster_of(v);
    ClusterId target = current;
    if (config.greedy) {
      const double best = *std::min_element(deltas.begin(), deltas.end());
      if (best < -kDeltaTolerance) {
        for (std::size_t c = 0; c < k; ++c) {
          if (deltas[c] <= best + kDeltaTolerance) {
            target = static_cast<ClusterId>(c);
            break;
          }
        }
      }
    } else {
      target = static_cast<ClusterId>(
          sample_boltzmann(deltas, config.temperature, rng));
    }
    if (target != current) {
      partition.move(graph, v, target);
      ++moves;
    }
  }
  return moves;
}

ClusterResult cluster(const SignedGraph& graph, const ClusterConfig& config) {
  config.validate();
  if (config.k > graph.node_count()) {
    throw ArgumentError("cluster count " + std::to_string(config.k) +
                        " exceeds node count " +
                        std::to_string(graph.node_count()));
  }
  std::optional<ClusterResult> best;
  std::vector<double> restart_phis;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    Rng rng(mix_seed(config.seed, r));
    std::vector<ClusterId> assignment(graph.node_count());
    for (ClusterId& c : assignment) {
      c = static_cast<ClusterId>(rng.below(config.k));
    }
    Partition partition(graph, std::move(assignment), config.k);
    std::vector<SweepRecord> trace;
    const double initial = partition.objective();
    double previous = initial;
    for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep) {
      const std::size_t moves = gibbs_sweep(graph, partition, config, rng);
      const double phi = partition.objective();
      trace.push_back({sweep, phi, moves});
      if (config.k == 1) break;
      if (config.greedy && moves == 0) break;
      if (config.early_stop_rel_tol > 0.0 &&
          std::abs(previous - phi) <
              config.early_stop_rel_tol * std::max(previous, 1e-300)) {
        break;
      }
      previous = phi;
    }
    const double final_phi = trace.back().phi;
    restart_phis.push_back(final_phi);
    if (!best || final_phi < best->trace.back().phi) {
      best = ClusterResult{std::move(partition), std::move(trace), initial, r,
                           {}};
    }
  }
  best->restart_phis = std::move(restart_phis);
  return std::move(*best);
}

void assign_isolated_to_largest(const SignedGraph& graph,
                                Partition& partition) {
  const ClusterId largest = partition.largest_cluster();
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.out_degree(v) == 0 && graph.in_degree(v) == 0) {
      partition.move(graph, v, largest);
    }
  }
}

std::string to_string(ScanOrder scan) {
  return scan == ScanOrder::kDeterministic ? "deterministic" : "random";
}

ScanOrder parse_scan_order(const std::string& text) {
  if (text == "deterministic") return ScanOrder::kDeterministic;
  if (text == "random") return ScanOrder::kRandom;
  throw ArgumentError("unknown scan order '" + text + "'");
}

}  // namespace linklabel
