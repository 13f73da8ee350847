#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linklabel/partition.hpp"
#include "linklabel/rng.hpp"

namespace linklabel {

enum class ScanOrder { kDeterministic, kRandom };

struct ClusterConfig {
  std::size_t k = 30;
  std::size_t max_sweeps = 20;
  ScanOrder scan = ScanOrder::kDeterministic;
  double temperature = 1.0;
  bool greedy = true;
  std::uint64_t seed = 1;
  // Stop once |Δφ| over a sweep falls below this fraction of φ; 0 disables.
  double early_stop_rel_tol = 1e-6;
  std::size_t restarts = 3;

  void validate() const;
};

struct SweepRecord {
  std::size_t sweep = 0;
  double phi = 0.0;
  std::size_t moves = 0;
};

struct ClusterResult {
  Partition partition;
  std::vector<SweepRecord> trace;  // of the winning restart
  double initial_phi = 0.0;
  std::size_t restart = 0;
  std::vector<double> restart_phis;
};

// Boltzmann draw over candidate deltas: P(c) ∝ exp(−(Δ_c − min Δ) / T).
std::size_t sample_boltzmann(std::span<const double> deltas,
                             double temperature, Rng& rng);

// One Gibbs pass: every node is visited once in id order, or n nodes are
// drawn with replacement in random-scan mode. Greedy mode moves a node only
// on a strict improvement, choosing the lowest cluster id among the best.
// Returns the number of nodes whose cluster changed.
std::size_t gibbs_sweep(const SignedGraph& graph, Partition& partition,
                        const ClusterConfig& config, Rng& rng);

// Random initial assignment, sweeps until max_sweeps or early stop, best of
// `restarts` runs by final φ. Deterministic given the config.
ClusterResult cluster(const SignedGraph& graph, const ClusterConfig& config);

// Reassigns nodes with no edges at all to the largest cluster.
void assign_isolated_to_largest(const SignedGraph& graph, Partition& partition);

std::string to_string(ScanOrder scan);
ScanOrder parse_scan_order(const std::string& text);

}  // namespace linklabel
