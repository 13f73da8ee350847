#include "linklabel/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "linklabel/rng.hpp"

namespace linklabel {

LabelAlphabet::LabelAlphabet(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (names_.size() < 2) {
    throw ArgumentError("label alphabet needs at least two labels");
  }
  if (names_.size() >= LabelSelector::kAnyCode) {
    throw ArgumentError("label alphabet too large");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) {
        throw ArgumentError("duplicate label name '" + names_[i] + "'");
      }
    }
  }
}

LabelAlphabet LabelAlphabet::signs() { return LabelAlphabet({"+", "-"}); }

LabelAlphabet LabelAlphabet::numbered(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return LabelAlphabet(std::move(names));
}

std::optional<Label> LabelAlphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

SignedGraph::SignedGraph(LabelAlphabet alphabet, std::size_t node_count)
    : alphabet_(std::move(alphabet)),
      out_(node_count),
      in_(node_count * (alphabet_.size() + 1)) {}

SignedGraph SignedGraph::from_edges(LabelAlphabet alphabet,
                                    std::size_t node_count,
                                    std::span<const Edge> edges,
                                    NormalizeReport* report) {
  SignedGraph g(std::move(alphabet), node_count);
  NormalizeReport local;
  local.input_edges = edges.size();

  std::vector<std::size_t> order;
  order.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.src >= node_count || e.dst >= node_count) {
      throw ArgumentError("edge endpoint out of range");
    }
    if (e.label >= g.label_count()) {
      throw ArgumentError("edge label out of range");
    }
    if (e.src == e.dst) {
      ++local.self_loops_dropped;
      continue;
    }
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (edges[a].src != edges[b].src) {
                       return edges[a].src < edges[b].src;
                     }
                     return edges[a].dst < edges[b].dst;
                   });

  const std::size_t slots = g.label_count() + 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Edge& e = edges[order[k]];
    // Within a run of equal (src, dst) the stable sort keeps input order, so
    // the run's last element is the last occurrence in the input.
    if (k + 1 < order.size() && edges[order[k + 1]].src == e.src &&
        edges[order[k + 1]].dst == e.dst) {
      ++local.duplicates_collapsed;
      continue;
    }
    g.out_[e.src].push_back({e.dst, e.label});
    // Sources are visited in ascending order, so tail lists stay sorted.
    g.in_[static_cast<std::size_t>(e.dst) * slots + e.label].push_back(e.src);
    g.in_[static_cast<std::size_t>(e.dst) * slots + g.label_count()].push_back(
        e.src);
    ++g.edge_count_;
  }
  if (report != nullptr) *report = local;
  return g;
}

std::optional<Label> SignedGraph::label_of(NodeId src, NodeId dst) const {
  const auto& out = out_[src];
  auto it = std::lower_bound(
      out.begin(), out.end(), dst,
      [](const OutEntry& e, NodeId head) { return e.head < head; });
  if (it != out.end() && it->head == dst) return it->label;
  return std::nullopt;
}

std::vector<Edge> SignedGraph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (NodeId u = 0; u < out_.size(); ++u) {
    for (const OutEntry& e : out_[u]) result.push_back({u, e.head, e.label});
  }
  return result;
}

std::vector<std::size_t> SignedGraph::label_counts() const {
  std::vector<std::size_t> counts(label_count(), 0);
  for (const auto& out : out_) {
    for (const OutEntry& e : out) ++counts[e.label];
  }
  return counts;
}

SignedGraph SignedGraph::with_edges(std::span<const Edge> edges) const {
  SignedGraph g = from_edges(alphabet_, node_count(), edges);
  g.external_ids_ = external_ids_;
  g.external_index_ = external_index_;
  return g;
}

void SignedGraph::set_external_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != node_count()) {
    throw ArgumentError("external id count does not match node count");
  }
  std::unordered_map<std::string, NodeId> index;
  index.reserve(ids.size());
  for (NodeId u = 0; u < ids.size(); ++u) {
    if (!index.emplace(ids[u], u).second) {
      throw ArgumentError("duplicate external id '" + ids[u] + "'");
    }
  }
  external_ids_ = std::move(ids);
  external_index_ = std::move(index);
}

std::string SignedGraph::external_id(NodeId u) const {
  if (external_ids_.empty()) return std::to_string(u);
  return external_ids_.at(u);
}

std::optional<NodeId> SignedGraph::find_node(
    std::string_view external_id) const {
  if (external_ids_.empty()) {
    NodeId value = 0;
    const char* first = external_id.data();
    const char* last = first + external_id.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value >= node_count()) {
      return std::nullopt;
    }
    return value;
  }
  auto it = external_index_.find(std::string(external_id));
  if (it == external_index_.end()) return std::nullopt;
  return it->second;
}

bool SignedGraph::check_consistency() const {
  const std::size_t n = node_count();
  const std::size_t labels = label_count();
  if (in_.size() != n * (labels + 1)) return false;

  std::vector<std::vector<std::vector<NodeId>>> expected(
      n, std::vector<std::vector<NodeId>>(labels));
  std::size_t total = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto& out = out_[u];
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k].head == u || out[k].head >= n || out[k].label >= labels) {
        return false;
      }
      if (k > 0 && out[k - 1].head >= out[k].head) return false;
      expected[out[k].head][out[k].label].push_back(u);
    }
    total += out.size();
  }
  if (total != edge_count_) return false;

  std::size_t in_total = 0;
  for (NodeId v = 0; v < n; ++v) {
    std::vector<NodeId> merged;
    for (std::size_t l = 0; l < labels; ++l) {
      auto tails = in_tails(v, static_cast<Label>(l));
      if (!std::equal(tails.begin(), tails.end(), expected[v][l].begin(),
                      expected[v][l].end())) {
        return false;
      }
      in_total += tails.size();
      merged.insert(merged.end(), tails.begin(), tails.end());
    }
    std::sort(merged.begin(), merged.end());
    auto any = in_tails(v, kAny);
    if (!std::equal(any.begin(), any.end(), merged.begin(), merged.end())) {
      return false;
    }
    if (std::adjacent_find(any.begin(), any.end(), std::greater_equal<>()) !=
        any.end()) {
      return false;
    }
  }
  return in_total == edge_count_;
}

bool operator==(const SignedGraph& a, const SignedGraph& b) {
  return a.alphabet_ == b.alphabet_ && a.edge_count_ == b.edge_count_ &&
         a.out_ == b.out_ && a.in_ == b.in_ &&
         a.external_ids_ == b.external_ids_;
}

NodeId SignedGraph::add_node(std::string external_id) {
  const auto id = static_cast<NodeId>(out_.size());
  if (!external_ids_.empty() || !external_id.empty()) {
    if (external_ids_.size() != out_.size()) {
      throw ArgumentError("cannot mix interned and anonymous nodes");
    }
    if (!external_index_.emplace(external_id, id).second) {
      throw ArgumentError("duplicate external id '" + external_id + "'");
    }
    external_ids_.push_back(std::move(external_id));
  }
  out_.emplace_back();
  in_.resize(in_.size() + label_count() + 1);
  return id;
}

namespace {

void sorted_insert(std::vector<NodeId>& v, NodeId x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<NodeId>& v, NodeId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

std::optional<Label> SignedGraph::upsert_edge(const Edge& e) {
  if (e.src >= node_count() || e.dst >= node_count() || e.src == e.dst ||
      e.label >= label_count()) {
    throw ArgumentError("invalid edge for upsert");
  }
  auto& out = out_[e.src];
  auto it = std::lower_bound(
      out.begin(), out.end(), e.dst,
      [](const OutEntry& x, NodeId head) { return x.head < head; });
  if (it != out.end() && it->head == e.dst) {
    const Label old = it->label;
    if (old != e.label) {
      it->label = e.label;
      sorted_erase(tails_mut(e.dst, old), e.src);
      sorted_insert(tails_mut(e.dst, e.label), e.src);
    }
    return old;
  }
  out.insert(it, {e.dst, e.label});
  sorted_insert(tails_mut(e.dst, e.label), e.src);
  sorted_insert(tails_mut(e.dst, label_count()), e.src);
  ++edge_count_;
  return std::nullopt;
}

SignedGraph sparsify(const SignedGraph& graph, double density,
                     std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw ArgumentError("density must lie in (0, 1]");
  }
  std::vector<Edge> all = graph.edges();
  const auto keep = static_cast<std::size_t>(
      std::llround(density * static_cast<double>(all.size())));
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(seed, 0x5A));
  rng.shuffle(idx);
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::vector<Edge> kept;
  kept.reserve(keep);
  for (std::size_t i : idx) kept.push_back(all[i]);
  return graph.with_edges(kept);
}

void validate_query(const SignedGraph& graph, PredictionQuery query) {
  if (query.initiator >= graph.node_count() ||
      query.receiver >= graph.node_count()) {
    throw ArgumentError("query node out of range");
  }
  if (query.initiator == query.receiver) {
    throw ArgumentError("query initiator equals receiver");
  }
}

Context context_of(const SignedGraph& graph, PredictionQuery query) {
  validate_query(graph, query);
  Context ctx;
  for (const OutEntry& e : graph.out_edges(query.initiator)) {
    if (e.head != query.receiver) ctx.entries.push_back(e);
  }
  if (!ctx.entries.empty()) {
    ctx.weights.assign(ctx.entries.size(),
                       1.0 / static_cast<double>(ctx.entries.size()));
  }
  return ctx;
}

}  // namespace linklabel
