#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "linklabel/cluster_counts.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/predictors.hpp"
#include "support.hpp"

namespace testing_support {

// A graph, a partition and every count structure over them, together with
// the same data as an oracle world. Not movable: the counts point into it.
struct Fixture {
  Fixture(std::size_t n, std::size_t labels, const std::vector<Edge>& edges,
          const std::vector<ClusterId>& assignment, std::size_t k)
      : graph(make_graph(n, labels, edges)),
        partition(graph, assignment, k),
        counts(graph),
        cluster_counts(graph, partition),
        world(make_world(n, labels, edges, assignment, k)) {}
  Fixture(const Fixture&) = delete;
  Fixture& operator=(const Fixture&) = delete;

  linklabel::ModelInputs inputs(const linklabel::SmoothingConfig& c) const {
    return linklabel::ModelInputs(graph, counts, &partition, &cluster_counts, c);
  }

  linklabel::SignedGraph graph;
  linklabel::Partition partition;
  linklabel::CooccurrenceCounts counts;
  linklabel::ClusterCounts cluster_counts;
  oracle::World world;
};

// Random graph of up to `max_nodes` nodes, random density and partition.
inline std::unique_ptr<Fixture> random_fixture(std::mt19937_64& rng,
                                               std::size_t max_nodes,
                                               std::size_t labels) {
  std::uniform_int_distribution<std::size_t> nodes(6, max_nodes);
  std::uniform_real_distribution<double> density(0.05, 0.35);
  const std::size_t n = nodes(rng);
  std::uniform_int_distribution<std::size_t> clusters(1, std::min<std::size_t>(6, n));
  const std::size_t k = clusters(rng);
  auto edges = random_edges(n, labels, density(rng), rng);
  if (edges.empty()) edges.push_back({0, 1, 0});
  const auto assignment = random_assignment(n, k, rng);
  return std::make_unique<Fixture>(n, labels, edges, assignment, k);
}

inline oracle::Settings oracle_settings(const linklabel::SmoothingConfig& c) {
  return {c.mu, c.lambda_mode == linklabel::LambdaMode::kPaper,
          c.lcgm_floor_alpha, c.prior_mode == linklabel::PriorMode::kEmpirical};
}

inline oracle::Dist oracle_predict(const oracle::World& w, linklabel::ModelKind kind,
                                   NodeId i, NodeId j, const oracle::Settings& s) {
  using linklabel::ModelKind;
  switch (kind) {
    case ModelKind::kLtlgm: return oracle::ltlgm(w, i, j);
    case ModelKind::kLcgm: return oracle::lcgm(w, i, j, s);
    case ModelKind::kGtlgm: return oracle::gtlgm(w, i, j);
    case ModelKind::kGcgm: return oracle::gcgm(w, i, j, s);
    case ModelKind::kStlgm: return oracle::stlgm(w, i, j, s);
    case ModelKind::kScgm: return oracle::scgm(w, i, j, s);
    default: break;
  }
  return {};
}

inline const std::vector<linklabel::ModelKind>& six_models() {
  using linklabel::ModelKind;
  static const std::vector<ModelKind> kinds = {ModelKind::kLtlgm, ModelKind::kLcgm,
                                               ModelKind::kGtlgm, ModelKind::kGcgm,
                                               ModelKind::kStlgm, ModelKind::kScgm};
  return kinds;
}

struct OracleComparison {
  std::size_t queries = 0;
  std::size_t comparisons = 0;
  std::size_t definedness_mismatches = 0;
  double max_error = 0.0;
  std::string worst;
};

// Every ordered pair (i, j), i != j, without an edge i -> j is a valid query.
inline void compare_with_oracle(const Fixture& f, const linklabel::SmoothingConfig& c,
                                OracleComparison& out) {
  const linklabel::ModelInputs in = f.inputs(c);
  const oracle::Settings s = oracle_settings(c);
  const std::size_t n = f.graph.node_count();
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || f.graph.label_of(i, j)) continue;
      ++out.queries;
      for (linklabel::ModelKind kind : six_models()) {
        const linklabel::LabelDistribution got = linklabel::predict(in, kind, {i, j});
        const oracle::Dist want = oracle_predict(f.world, kind, i, j, s);
        ++out.comparisons;
        if (got.defined != want.defined) {
          ++out.definedness_mismatches;
          out.worst = linklabel::to_string(kind) + " definedness";
          continue;
        }
        if (!got.defined) continue;
        for (std::size_t l = 0; l < want.probs.size(); ++l) {
          const double err = std::abs(got.probs[l] - want.probs[l]);
          if (!(err <= out.max_error)) {
            out.max_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
            out.worst = linklabel::to_string(kind) + " query " + std::to_string(i) +
                        "->" + std::to_string(j);
          }
        }
      }
    }
  }
}

}  // namespace testing_support
