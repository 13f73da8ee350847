#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "linklabel/graph.hpp"

namespace linklabel {

// Maps sign tokens in the third column onto labels, and labels back onto the
// token written by the writer.
struct LoadOptions {
  LabelAlphabet alphabet = LabelAlphabet::signs();
  std::map<std::string, Label, std::less<>> tokens;
  std::vector<std::string> output_tokens;

  // `1`, `+1`, `+` -> "+"; `-1`, `-` -> "-". Written back as 1 / -1.
  static LoadOptions signed_default();
  // Each label is spelled by its own name, both on input and output.
  static LoadOptions named(LabelAlphabet alphabet);
};

struct LoadReport {
  std::size_t data_lines = 0;
  std::size_t comment_lines = 0;
  std::size_t declared_nodes = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
  // Label histogram over every data line, before any normalization.
  std::vector<std::size_t> raw_label_counts;
};

struct LoadedGraph {
  SignedGraph graph;
  LoadReport report;
};

// Reads a SNAP-style `src dst sign` edge list. Lines starting with '#' are
// comments, except `# node <id>`, which declares a node that has no edges.
// Dense ids follow the numeric order of the external ids when every id is a
// canonical non-negative integer, lexicographic order otherwise.
LoadedGraph parse_edge_list(std::istream& in,
                            const LoadOptions& options = LoadOptions::signed_default());
LoadedGraph load_edge_list(const std::filesystem::path& path,
                           const LoadOptions& options = LoadOptions::signed_default());

// Edges in (src, dst) order; isolated nodes are emitted as `# node <id>`.
void write_edge_list(std::ostream& out, const SignedGraph& graph,
                     const LoadOptions& options = LoadOptions::signed_default());
void save_edge_list(const std::filesystem::path& path, const SignedGraph& graph,
                    const LoadOptions& options = LoadOptions::signed_default());

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<std::size_t> label_counts;
  std::vector<double> label_shares;
};

GraphStats compute_stats(const SignedGraph& graph);

// Reads `src dst` pairs (external ids), one per line, '#' comments allowed.
std::vector<PredictionQuery> load_queries(const std::filesystem::path& path,
                                          const SignedGraph& graph);

// SHA-256 of a file's bytes, lowercase hex.
std::string file_digest(const std::filesystem::path& path);

}  // namespace linklabel
