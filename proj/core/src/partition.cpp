#include "linklabel/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace linklabel {

namespace {

double xlog2x(std::uint64_t n) {
  if (n == 0) return 0.0;
  const auto x = static_cast<double>(n);
  return x * std::log2(x);
}

}  // namespace

double weighted_entropy(std::span<const std::uint64_t> label_counts) {
  std::uint64_t total = 0;
  double sum = 0.0;
  for (std::uint64_t n : label_counts) {
    total += n;
    sum += xlog2x(n);
  }
  return xlog2x(total) - sum;
}

Partition::Partition(const SignedGraph& graph,
                     std::vector<ClusterId> assignment, std::size_t k)
    : k_(k),
      labels_(graph.label_count()),
      assignment_(std::move(assignment)),
      pair_label_(k * k * graph.label_count(), 0),
      pair_total_(k * k, 0),
      sizes_(k, 0) {
  if (k == 0) throw ArgumentError("cluster count must be positive");
  if (assignment_.size() != graph.node_count()) {
    throw ArgumentError("assignment size does not match node count");
  }
  for (ClusterId c : assignment_) {
    if (c >= k) throw ArgumentError("cluster id out of range");
    ++sizes_[c];
  }
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    for (const OutEntry& e : graph.out_edges(u)) {
      bump(assignment_[u], assignment_[e.head], e.label, +1);
    }
  }
}

void Partition::bump(ClusterId c, ClusterId d, Label l, std::int64_t delta) {
  const std::size_t p = pair_index(c, d);
  pair_label_[p * labels_ + l] =
      static_cast<std::uint64_t>(static_cast<std::int64_t>(pair_label_[p * labels_ + l]) + delta);
  pair_total_[p] =
      static_cast<std::uint64_t>(static_cast<std::int64_t>(pair_total_[p]) + delta);
}

ClusterId Partition::largest_cluster() const {
  return static_cast<ClusterId>(
      std::max_element(sizes_.begin(), sizes_.end()) - sizes_.begin());
}

double Partition::objective() const {
  double phi = 0.0;
  for (std::size_t p = 0; p < pair_total_.size(); ++p) {
    if (pair_total_[p] == 0) continue;
    phi += weighted_entropy(
        std::span<const std::uint64_t>(pair_label_.data() + p * labels_, labels_));
  }
  return phi;
}

double Partition::delta_objective(const SignedGraph& graph, NodeId v,
                                  ClusterId to) const {
  if (to >= k_) throw ArgumentError("target cluster out of range");
  MoveEvaluator eval(graph, *this);
  eval.load(v);
  return eval.delta(to);
}

void Partition::move(const SignedGraph& graph, NodeId v, ClusterId to) {
  const ClusterId from = assignment_[v];
  if (from == to) return;
  for (const OutEntry& e : graph.out_edges(v)) {
    const ClusterId d = assignment_[e.head];
    bump(from, d, e.label, -1);
    bump(to, d, e.label, +1);
  }
  for (std::size_t l = 0; l < labels_; ++l) {
    for (NodeId u : graph.in_tails(v, static_cast<Label>(l))) {
      const ClusterId c = assignment_[u];
      bump(c, from, static_cast<Label>(l), -1);
      bump(c, to, static_cast<Label>(l), +1);
    }
  }
  --sizes_[from];
  ++sizes_[to];
  assignment_[v] = to;
}

bool Partition::counts_match(const SignedGraph& graph) const {
  if (graph.node_count() != assignment_.size()) return false;
  const Partition fresh(graph, assignment_, k_);
  return fresh == *this;
}

void Partition::add_node(ClusterId c) {
  if (c >= k_) throw ArgumentError("cluster id out of range");
  assignment_.push_back(c);
  ++sizes_[c];
}

void Partition::add_edge(const Edge& e) {
  bump(assignment_[e.src], assignment_[e.dst], e.label, +1);
}

void Partition::remove_edge(const Edge& e) {
  bump(assignment_[e.src], assignment_[e.dst], e.label, -1);
}

MoveEvaluator::MoveEvaluator(const SignedGraph& graph,
                             const Partition& partition)
    : graph_(graph),
      partition_(partition),
      scratch_(partition.k() * partition.label_count(), 0),
      histogram_(partition.label_count(), 0) {}

void MoveEvaluator::load(NodeId v) {
  node_ = v;
  from_ = partition_.cluster_of(v);
  const std::size_t labels = partition_.label_count();

  auto collect = [&](auto&& visit,
                     std::vector<std::pair<std::size_t, std::int64_t>>& out) {
    touched_.clear();
    visit([&](ClusterId c, Label l) {
      const std::size_t slot = static_cast<std::size_t>(c) * labels + l;
      if (scratch_[slot]++ == 0) touched_.push_back(slot);
    });
    std::sort(touched_.begin(), touched_.end());
    out.clear();
    for (std::size_t slot : touched_) {
      out.emplace_back(slot, scratch_[slot]);
      scratch_[slot] = 0;
    }
  };

  collect(
      [&](auto&& add) {
        for (const OutEntry& e : graph_.out_edges(v)) {
          add(partition_.cluster_of(e.head), e.label);
        }
      },
      out_profile_);
  collect(
      [&](auto&& add) {
        for (std::size_t l = 0; l < labels; ++l) {
          for (NodeId u : graph_.in_tails(v, static_cast<Label>(l))) {
            add(partition_.cluster_of(u), static_cast<Label>(l));
          }
        }
      },
      in_profile_);
}

double MoveEvaluator::delta(ClusterId to) const {
  if (to == from_) return 0.0;
  const std::size_t labels = partition_.label_count();
  changes_.clear();
  for (const auto& [slot, cnt] : out_profile_) {
    const auto d = static_cast<ClusterId>(slot / labels);
    const auto l = static_cast<Label>(slot % labels);
    changes_.push_back({partition_.pair_index(from_, d), l, -cnt});
    changes_.push_back({partition_.pair_index(to, d), l, cnt});
  }
  for (const auto& [slot, cnt] : in_profile_) {
    const auto c = static_cast<ClusterId>(slot / labels);
    const auto l = static_cast<Label>(slot % labels);
    changes_.push_back({partition_.pair_index(c, from_), l, -cnt});
    changes_.push_back({partition_.pair_index(c, to), l, cnt});
  }
  std::sort(changes_.begin(), changes_.end(),
            [](const Change& a, const Change& b) { return a.pair < b.pair; });

  double total = 0.0;
  for (std::size_t i = 0; i < changes_.size();) {
    const std::size_t pair = changes_[i].pair;
    const std::uint64_t* base = partition_.pair_label_.data() + pair * labels;
    std::copy(base, base + labels, histogram_.begin());
    const double before = weighted_entropy(histogram_);
    for (; i < changes_.size() && changes_[i].pair == pair; ++i) {
      auto& h = histogram_[changes_[i].label];
      h = static_cast<std::uint64_t>(static_cast<std::int64_t>(h) + changes_[i].delta);
    }
    total += weighted_entropy(histogram_) - before;
  }
  return total;
}

void MoveEvaluator::all_deltas(std::span<double> out) const {
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = delta(static_cast<ClusterId>(c));
  }
}

void save_partition(const std::filesystem::path& path,
                    const SignedGraph& graph, const Partition& partition) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "# k " << partition.k() << '\n';
  for (NodeId v = 0; v < partition.node_count(); ++v) {
    out << graph.external_id(v) << ' ' << partition.cluster_of(v) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Partition load_partition(const std::filesystem::path& path,
                         const SignedGraph& graph) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  constexpr ClusterId kUnset = ~ClusterId{0};
  std::vector<ClusterId> assignment(graph.node_count(), kUnset);
  std::size_t k = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (a == "#") {
      if (fields >> b && b == "k") fields >> k;
      continue;
    }
    if (a.front() == '#') continue;
    ClusterId c = 0;
    if (!(fields >> c) || (fields >> extra)) {
      throw ParseError(line_no, "expected `node_id cluster_id`");
    }
    auto v = graph.find_node(a);
    if (!v) throw ParseError(line_no, "unknown node '" + a + "'");
    assignment[*v] = c;
    k = std::max<std::size_t>(k, c + 1);
  }
  for (ClusterId c : assignment) {
    if (c == kUnset) throw ArgumentError("partition file misses some nodes");
  }
  if (k == 0) k = 1;
  return Partition(graph, std::move(assignment), k);
}

}  // namespace linklabel
