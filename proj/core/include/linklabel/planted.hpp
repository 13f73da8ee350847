#pragma once

#include <cstdint>
#include <vector>

#include "linklabel/graph.hpp"

namespace linklabel {

struct PlantedOptions {
  std::size_t n_nodes = 90;
  std::size_t n_roles = 3;
  double edge_prob = 0.2;
  double noise = 0.0;
  std::uint64_t seed = 1;
  std::size_t n_labels = 2;
};

// Synthetic role graph: node v holds role v % n_roles, every ordered pair is
// an edge with probability edge_prob, and its label comes from a role-pair
// table, replaced by a uniformly chosen other label with probability noise.
struct PlantedGraph {
  SignedGraph graph;
  std::vector<ClusterId> roles;
  std::size_t n_roles = 0;
  std::vector<Label> role_table;  // row-major n_roles x n_roles

  Label table_label(ClusterId from, ClusterId to) const {
    return role_table[static_cast<std::size_t>(from) * n_roles + to];
  }
};

PlantedGraph generate_planted(const PlantedOptions& options);

}  // namespace linklabel
