#include "linklabel/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace linklabel {

LoadOptions LoadOptions::signed_default() {
  LoadOptions o;
  o.alphabet = LabelAlphabet::signs();
  o.tokens = {{"1", 0}, {"+1", 0}, {"+", 0}, {"-1", 1}, {"-", 1}};
  o.output_tokens = {"1", "-1"};
  return o;
}

LoadOptions LoadOptions::named(LabelAlphabet alphabet) {
  LoadOptions o;
  o.alphabet = std::move(alphabet);
  for (std::size_t l = 0; l < o.alphabet.size(); ++l) {
    o.tokens.emplace(o.alphabet.name(static_cast<Label>(l)),
                     static_cast<Label>(l));
    o.output_tokens.push_back(o.alphabet.name(static_cast<Label>(l)));
  }
  return o;
}

namespace {

constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::size_t split_tokens(std::string_view line, std::string_view* out,
                         std::size_t max_tokens) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (count < max_tokens) out[count] = line.substr(i, j - i);
    ++count;
    i = j;
  }
  return count;
}

std::optional<std::uint64_t> canonical_uint(std::string_view s) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  return value;
}

class Interner {
 public:
  std::size_t intern(std::string_view token) {
    auto it = index_.find(std::string(token));
    if (it != index_.end()) return it->second;
    const std::size_t id = tokens_.size();
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), id);
    return id;
  }

  // Permutation from first-appearance index to final dense id.
  std::vector<NodeId> dense_order(std::vector<std::string>& sorted_ids) const {
    std::vector<std::size_t> order(tokens_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::uint64_t> numeric(tokens_.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < tokens_.size() && all_numeric; ++i) {
      auto v = canonical_uint(tokens_[i]);
      if (v) {
        numeric[i] = *v;
      } else {
        all_numeric = false;
      }
    }
    if (all_numeric) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return numeric[a] < numeric[b];
      });
    } else {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tokens_[a] < tokens_[b];
      });
    }
    std::vector<NodeId> dense(tokens_.size());
    sorted_ids.clear();
    sorted_ids.reserve(tokens_.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      dense[order[rank]] = static_cast<NodeId>(rank);
      sorted_ids.push_back(tokens_[order[rank]]);
    }
    return dense;
  }

  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

LoadedGraph parse_edge_list(std::istream& in, const LoadOptions& options) {
  LoadReport report;
  report.raw_label_counts.assign(options.alphabet.size(), 0);
  Interner interner;
  std::vector<Edge> edges;  // endpoints hold first-appearance indices for now

  std::string line;
  std::size_t line_no = 0;
  std::string_view tok[4];
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    std::size_t first = 0;
    while (first < view.size() && is_space(view[first])) ++first;
    if (first == view.size()) continue;
    if (view[first] == '#') {
      const std::size_t n = split_tokens(view.substr(first + 1), tok, 4);
      if (n == 2 && tok[0] == "node") {
        interner.intern(tok[1]);
        ++report.declared_nodes;
      } else {
        ++report.comment_lines;
      }
      continue;
    }
    const std::size_t n = split_tokens(view, tok, 4);
    if (n != 3) {
      throw ParseError(line_no, "expected 3 fields (src dst sign), found " +
                                    std::to_string(n));
    }
    auto label = options.tokens.find(tok[2]);
    if (label == options.tokens.end()) {
      throw ParseError(line_no,
                       "unknown sign token '" + std::string(tok[2]) + "'");
    }
    const auto src = static_cast<NodeId>(interner.intern(tok[0]));
    const auto dst = static_cast<NodeId>(interner.intern(tok[1]));
    edges.push_back({src, dst, label->second});
    ++report.data_lines;
    ++report.raw_label_counts[label->second];
  }
  if (in.bad()) throw IoError("read error while parsing edge list");

  std::vector<std::string> ids;
  const std::vector<NodeId> dense = interner.dense_order(ids);
  for (Edge& e : edges) {
    e.src = dense[e.src];
    e.dst = dense[e.dst];
  }
  NormalizeReport norm;
  SignedGraph graph = SignedGraph::from_edges(options.alphabet, ids.size(),
                                              edges, &norm);
  graph.set_external_ids(std::move(ids));
  report.self_loops_dropped = norm.self_loops_dropped;
  report.duplicates_collapsed = norm.duplicates_collapsed;
  return {std::move(graph), std::move(report)};
}

LoadedGraph load_edge_list(const std::filesystem::path& path,
                           const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const SignedGraph& graph,
                     const LoadOptions& options) {
  if (options.output_tokens.size() != graph.label_count()) {
    throw ArgumentError("output tokens do not cover the label alphabet");
  }
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    if (graph.out_degree(u) == 0 && graph.in_degree(u) == 0) {
      out << "# node " << graph.external_id(u) << '\n';
    }
  }
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    const std::string src = graph.external_id(u);
    for (const OutEntry& e : graph.out_edges(u)) {
      out << src << '\t' << graph.external_id(e.head) << '\t'
          << options.output_tokens[e.label] << '\n';
    }
  }
}

void save_edge_list(const std::filesystem::path& path,
                    const SignedGraph& graph, const LoadOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_edge_list(out, graph, options);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

GraphStats compute_stats(const SignedGraph& graph) {
  GraphStats s;
  s.node_count = graph.node_count();
  s.edge_count = graph.edge_count();
  s.label_counts = graph.label_counts();
  for (std::size_t c : s.label_counts) {
    s.label_shares.push_back(
        s.edge_count == 0 ? 0.0
                          : static_cast<double>(c) /
                                static_cast<double>(s.edge_count));
  }
  return s;
}

std::vector<PredictionQuery> load_queries(const std::filesystem::path& path,
                                          const SignedGraph& graph) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<PredictionQuery> queries;
  std::string line;
  std::size_t line_no = 0;
  std::string_view tok[3];
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t n = split_tokens(line, tok, 3);
    if (n == 0 || tok[0].front() == '#') continue;
    if (n != 2) throw ParseError(line_no, "expected 2 fields (src dst)");
    auto src = graph.find_node(tok[0]);
    auto dst = graph.find_node(tok[1]);
    if (!src || !dst) {
      throw ParseError(line_no, "query names a node absent from the graph");
    }
    PredictionQuery q{*src, *dst};
    validate_query(graph, q);
    queries.push_back(q);
  }
  return queries;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

}  // namespace linklabel
