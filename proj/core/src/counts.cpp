#include "linklabel/counts.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>

#include "linklabel/rng.hpp"

namespace linklabel {

std::size_t intersect_count(std::span<const NodeId> a,
                            std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::uint64_t nam_count(const SignedGraph& graph, NodeId m, LabelSelector l,
                        NodeId n, LabelSelector l2) {
  return intersect_count(graph.in_tails(m, l), graph.in_tails(n, l2));
}

std::size_t NamKeyHash::operator()(const NamKey& k) const noexcept {
  const std::uint64_t a = (static_cast<std::uint64_t>(k.m) << 32) | k.n;
  const std::uint64_t b = (static_cast<std::uint64_t>(k.l) << 8) | k.l2;
  return static_cast<std::size_t>(mix_seed(a, b));
}

std::uint64_t projected_nam_cost(const SignedGraph& graph,
                                 const NodeFilter& filter) {
  std::uint64_t cost = 0;
  for (NodeId w = 0; w < graph.node_count(); ++w) {
    std::uint64_t deg = 0;
    for (const OutEntry& e : graph.out_edges(w)) {
      if (!filter || filter(e.head)) ++deg;
    }
    cost += deg * deg;
  }
  return cost;
}

CooccurrenceCounts CooccurrenceCounts::precompute(
    const SignedGraph& graph, const NamBuildOptions& options) {
  const std::uint64_t cost = projected_nam_cost(graph, options.node_filter);
  if (cost > options.budget && !options.override_budget) {
    throw ResourceError(
        "precomputed co-occurrence table needs " + std::to_string(cost) +
        " pair visits, over the budget of " + std::to_string(options.budget) +
        "; use the on-demand strategy or override the budget");
  }
  CooccurrenceCounts counts(graph, Strategy::kPrecomputed);
  counts.filter_ = options.node_filter;
  std::vector<OutEntry> heads;
  for (NodeId w = 0; w < graph.node_count(); ++w) {
    heads.clear();
    for (const OutEntry& e : graph.out_edges(w)) {
      if (counts.materialized(e.head, e.head)) heads.push_back(e);
    }
    for (const OutEntry& a : heads) {
      for (const OutEntry& b : heads) counts.bump_pair(a, b, +1);
    }
  }
  return counts;
}

std::uint64_t CooccurrenceCounts::count(NodeId m, LabelSelector l, NodeId n,
                                        LabelSelector l2) const {
  if (strategy_ == Strategy::kOnDemand || !materialized(m, n)) {
    return nam_count(*graph_, m, l, n, l2);
  }
  auto it = table_.find({m, n, l.code(), l2.code()});
  return it == table_.end() ? 0 : it->second;
}

void CooccurrenceCounts::bump(const NamKey& key, int delta) {
  if (delta > 0) {
    table_[key] += static_cast<std::uint32_t>(delta);
    return;
  }
  auto it = table_.find(key);
  if (it == table_.end() || it->second < static_cast<std::uint32_t>(-delta)) {
    throw Error("co-occurrence table underflow during retraction");
  }
  it->second -= static_cast<std::uint32_t>(-delta);
  if (it->second == 0) table_.erase(it);
}

// One tail pointing at a and at b: the labelled key and its ANY projections.
void CooccurrenceCounts::bump_pair(OutEntry a, OutEntry b, int delta) {
  const std::uint8_t any = LabelSelector::kAnyCode;
  bump({a.head, b.head, a.label, b.label}, delta);
  bump({a.head, b.head, any, b.label}, delta);
  bump({a.head, b.head, a.label, any}, delta);
  bump({a.head, b.head, any, any}, delta);
}

void CooccurrenceCounts::add_tail_edge(OutEntry edge,
                                       std::span<const OutEntry> others) {
  if (strategy_ != Strategy::kPrecomputed) return;
  if (!materialized(edge.head, edge.head)) return;
  bump_pair(edge, edge, +1);
  for (const OutEntry& o : others) {
    if (!materialized(o.head, o.head)) continue;
    bump_pair(edge, o, +1);
    bump_pair(o, edge, +1);
  }
}

void CooccurrenceCounts::retract_tail_edge(OutEntry edge,
                                           std::span<const OutEntry> others) {
  if (strategy_ != Strategy::kPrecomputed) return;
  if (!materialized(edge.head, edge.head)) return;
  bump_pair(edge, edge, -1);
  for (const OutEntry& o : others) {
    if (!materialized(o.head, o.head)) continue;
    bump_pair(edge, o, -1);
    bump_pair(o, edge, -1);
  }
}

std::vector<std::pair<NamKey, std::uint32_t>>
CooccurrenceCounts::sorted_entries() const {
  std::vector<std::pair<NamKey, std::uint32_t>> entries(table_.begin(),
                                                        table_.end());
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return entries;
}

namespace {

constexpr std::array<char, 8> kSnapshotMagic = {'L', 'L', 'N', 'A',
                                                'M', 'S', 'N', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("truncated co-occurrence snapshot");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

void CooccurrenceCounts::write_snapshot(std::ostream& out) const {
  if (strategy_ != Strategy::kPrecomputed) {
    throw ArgumentError("only precomputed tables can be snapshotted");
  }
  if (filter_) {
    throw ArgumentError("filtered tables cannot be snapshotted");
  }
  const auto entries = sorted_entries();
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(graph_->label_count()));
  put_le<std::uint64_t>(out, graph_->node_count());
  put_le<std::uint64_t>(out, entries.size());
  for (const auto& [key, value] : entries) {
    put_le<std::uint32_t>(out, key.m);
    put_le<std::uint8_t>(out, key.l);
    put_le<std::uint32_t>(out, key.n);
    put_le<std::uint8_t>(out, key.l2);
    put_le<std::uint32_t>(out, value);
  }
  if (!out) throw IoError("failed to write co-occurrence snapshot");
}

CooccurrenceCounts CooccurrenceCounts::read_snapshot(std::istream& in,
                                                     const SignedGraph& graph) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kSnapshotMagic) {
    throw IoError("not a co-occurrence snapshot");
  }
  if (get_le<std::uint32_t>(in) != kSnapshotVersion) {
    throw IoError("unsupported co-occurrence snapshot version");
  }
  const auto labels = get_le<std::uint32_t>(in);
  const auto nodes = get_le<std::uint64_t>(in);
  if (labels != graph.label_count() || nodes != graph.node_count()) {
    throw IoError("snapshot does not match the graph's shape");
  }
  const auto n_entries = get_le<std::uint64_t>(in);
  CooccurrenceCounts counts(graph, Strategy::kPrecomputed);
  counts.table_.reserve(n_entries);
  for (std::uint64_t i = 0; i < n_entries; ++i) {
    NamKey key;
    key.m = get_le<std::uint32_t>(in);
    key.l = get_le<std::uint8_t>(in);
    key.n = get_le<std::uint32_t>(in);
    key.l2 = get_le<std::uint8_t>(in);
    counts.table_[key] = get_le<std::uint32_t>(in);
  }
  return counts;
}

}  // namespace linklabel
