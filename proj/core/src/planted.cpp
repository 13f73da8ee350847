#include "linklabel/planted.hpp"

#include "linklabel/rng.hpp"

namespace linklabel {

PlantedGraph generate_planted(const PlantedOptions& options) {
  if (options.n_roles < 2) throw ArgumentError("n_roles must be at least 2");
  if (options.n_roles > options.n_nodes) {
    throw ArgumentError("n_roles exceeds n_nodes");
  }
  if (!(options.edge_prob >= 0.0 && options.edge_prob <= 1.0) ||
      !(options.noise >= 0.0 && options.noise <= 1.0)) {
    throw ArgumentError("edge_prob and noise must lie in [0, 1]");
  }
  LabelAlphabet alphabet = options.n_labels == 2
                               ? LabelAlphabet::signs()
                               : LabelAlphabet::numbered(options.n_labels);
  const std::size_t labels = alphabet.size();

  Rng rng(options.seed);
  PlantedGraph out;
  out.n_roles = options.n_roles;
  out.role_table.resize(options.n_roles * options.n_roles);
  for (Label& l : out.role_table) l = static_cast<Label>(rng.below(labels));

  out.roles.resize(options.n_nodes);
  for (std::size_t v = 0; v < options.n_nodes; ++v) {
    out.roles[v] = static_cast<ClusterId>(v % options.n_roles);
  }

  std::vector<Edge> edges;
  for (std::size_t u = 0; u < options.n_nodes; ++u) {
    for (std::size_t v = 0; v < options.n_nodes; ++v) {
      if (u == v || !rng.bernoulli(options.edge_prob)) continue;
      Label l = out.table_label(out.roles[u], out.roles[v]);
      if (rng.bernoulli(options.noise)) {
        // Uniform over the other labels.
        const auto shift = static_cast<Label>(1 + rng.below(labels - 1));
        l = static_cast<Label>((l + shift) % labels);
      }
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), l});
    }
  }
  out.graph = SignedGraph::from_edges(std::move(alphabet), options.n_nodes,
                                      edges);
  return out;
}

}  // namespace linklabel
