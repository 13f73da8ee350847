#include "linklabel/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

#include "linklabel/cluster_counts.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/rng.hpp"

namespace linklabel {

std::size_t FoldPlan::fold_size(std::size_t fold) const {
  return static_cast<std::size_t>(
      std::count(fold_of_edge.begin(), fold_of_edge.end(), fold));
}

FoldPlan make_folds(const SignedGraph& graph, std::size_t k, std::uint64_t seed,
                    bool stratified) {
  if (k < 2) throw ArgumentError("fold count must be at least 2");
  if (graph.edge_count() < k) {
    throw ArgumentError("graph has fewer edges than folds");
  }
  const std::vector<Edge> edges = graph.edges();
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(seed, 0xF0));
  rng.shuffle(order);
  if (stratified) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return edges[a].label < edges[b].label;
                     });
  }
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.fold_of_edge.resize(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    plan.fold_of_edge[order[i]] = static_cast<std::uint32_t>(i % k);
  }
  return plan;
}

std::uint64_t ConfusionMatrix::truth_count(Label truth) const {
  std::uint64_t n = 0;
  for (std::size_t p = 0; p < labels_; ++p) n += at(truth, static_cast<Label>(p));
  return n;
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::correct() const {
  std::uint64_t n = 0;
  for (std::size_t l = 0; l < labels_; ++l) {
    n += at(static_cast<Label>(l), static_cast<Label>(l));
  }
  return n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.labels_ != labels_) throw ArgumentError("confusion shape mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

namespace {

__extension__ typedef unsigned __int128 Wide;

Wide gcd_wide(Wide a, Wide b) {
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// sum of hit[l] / truth[l] over the present classes, divided by their count,
// as an exact fraction; nullopt once the terms outgrow 2^53.
std::optional<double> exact_mean(const std::vector<std::uint64_t>& hit,
                                 const std::vector<std::uint64_t>& truth) {
  constexpr Wide kLimit = Wide{1} << 53;
  Wide num = 0, den = 1;
  for (std::size_t i = 0; i < hit.size(); ++i) {
    const Wide g = gcd_wide(den, truth[i]);
    const Wide scale = truth[i] / g;
    if (den > kLimit || scale > kLimit) return std::nullopt;
    num = num * scale + Wide{hit[i]} * (den / g);
    den *= scale;
    const Wide r = gcd_wide(num, den);
    if (r > 1) {
      num /= r;
      den /= r;
    }
    if (num > kLimit || den > kLimit) return std::nullopt;
  }
  den *= hit.size();
  const Wide r = gcd_wide(num, den);
  if (r > 1) {
    num /= r;
    den /= r;
  }
  if (num > kLimit || den > kLimit) return std::nullopt;
  // Both operands are exact doubles, so the quotient is correctly rounded.
  return static_cast<double>(static_cast<std::uint64_t>(num)) /
         static_cast<double>(static_cast<std::uint64_t>(den));
}

}  // namespace

BalancedAccuracy balanced_accuracy(const ConfusionMatrix& confusion) {
  BalancedAccuracy out;
  out.tpr.resize(confusion.labels());
  double sum = 0.0;
  std::size_t included = 0;
  std::vector<std::uint64_t> hits, truths;
  for (std::size_t l = 0; l < confusion.labels(); ++l) {
    const auto label = static_cast<Label>(l);
    const std::uint64_t truth = confusion.truth_count(label);
    if (truth == 0) {
      out.excluded.push_back(label);
      continue;
    }
    const double tpr = static_cast<double>(confusion.at(label, label)) /
                       static_cast<double>(truth);
    out.tpr[l] = tpr;
    sum += tpr;
    ++included;
    hits.push_back(confusion.at(label, label));
    truths.push_back(truth);
  }
  if (included == 0) {
    throw ArgumentError("balanced accuracy of an empty confusion matrix");
  }
  out.value = exact_mean(hits, truths).value_or(sum / static_cast<double>(included));
  return out;
}

namespace {

struct Outcome {
  Label predicted = 0;
  bool fallback = false;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is
// handled exactly once and results are written by index, so the outcome is
// independent of the thread count.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        const std::size_t end = std::min(n, (t + 1) * chunk);
        for (std::size_t i = t * chunk; i < end; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct FoldSplit {
  SignedGraph training;
  std::vector<Edge> test;
};

FoldSplit split_fold(const SignedGraph& graph, const std::vector<Edge>& edges,
                     const FoldPlan& plan, std::size_t fold) {
  std::vector<Edge> train;
  FoldSplit split;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (plan.fold_of_edge[i] == fold) {
      split.test.push_back(edges[i]);
    } else {
      train.push_back(edges[i]);
    }
  }
  split.training = graph.with_edges(train);
  for (const Edge& e : split.test) {
    if (split.training.label_of(e.src, e.dst)) {
      throw Error("test edge leaked into its training graph");
    }
  }
  return split;
}

void check_plan(const SignedGraph& graph, const FoldPlan& plan) {
  if (plan.fold_of_edge.size() != graph.edge_count()) {
    throw ArgumentError("fold plan does not match the graph");
  }
}

}  // namespace

std::vector<EvalReport> evaluate(const SignedGraph& graph, const FoldPlan& plan,
                                 const EvalOptions& options) {
  check_plan(graph, plan);
  options.smoothing.validate();
  if (options.models.empty()) throw ArgumentError("no models to evaluate");
  const bool any_global =
      std::any_of(options.models.begin(), options.models.end(), needs_partition);
  if (any_global) options.clustering.validate();

  const std::size_t labels = graph.label_count();
  std::vector<EvalReport> reports(options.models.size());
  for (std::size_t m = 0; m < reports.size(); ++m) {
    reports[m].model = options.models[m];
    reports[m].confusion = ConfusionMatrix(labels);
  }

  std::optional<Partition> shared;
  if (any_global && options.reuse_clustering) {
    shared = cluster(graph, options.clustering).partition;
  }

  const std::vector<Edge> edges = graph.edges();
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    FoldSplit split = split_fold(graph, edges, plan, fold);
    const SignedGraph& training = split.training;

    std::optional<Partition> partition;
    std::optional<ClusterCounts> cluster_counts;
    double phi = 0.0;
    if (any_global) {
      if (shared) {
        partition = Partition(training, shared->assignment(), shared->k());
      } else {
        ClusterConfig cfg = options.clustering;
        cfg.seed = mix_seed(options.clustering.seed, fold);
        partition = cluster(training, cfg).partition;
      }
      assign_isolated_to_largest(training, *partition);
      phi = partition->objective();
      cluster_counts.emplace(training, *partition);
    }
    const CooccurrenceCounts counts =
        options.precompute_nam
            ? CooccurrenceCounts::precompute(training, options.nam)
            : CooccurrenceCounts(training);

    for (std::size_t m = 0; m < options.models.size(); ++m) {
      const ModelKind kind = options.models[m];
      const bool global = needs_partition(kind);
      const ModelInputs inputs(training, counts,
                               global ? &*partition : nullptr,
                               global ? &*cluster_counts : nullptr,
                               options.smoothing);
      std::vector<Outcome> outcomes(split.test.size());
      parallel_for(split.test.size(), options.threads, [&](std::size_t i) {
        const Edge& e = split.test[i];
        const LabelDistribution dist = predict(inputs, kind, {e.src, e.dst});
        const Decision d = decide(dist, inputs.prior);
        outcomes[i] = {d.label, d.used_fallback || dist.evidence == 0};
      });

      ConfusionMatrix fold_confusion(labels);
      FoldResult fr;
      fr.fold = fold;
      fr.test_edges = split.test.size();
      fr.phi = global ? phi : 0.0;
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        fold_confusion.add(split.test[i].label, outcomes[i].predicted);
        if (outcomes[i].fallback) ++fr.fallbacks;
      }
      fr.balanced_accuracy = balanced_accuracy(fold_confusion).value;
      EvalReport& report = reports[m];
      report.confusion += fold_confusion;
      report.fallbacks += fr.fallbacks;
      report.folds.push_back(fr);
    }
  }

  for (EvalReport& report : reports) {
    report.predictions = report.confusion.total();
    report.balanced = balanced_accuracy(report.confusion);
    report.accuracy = static_cast<double>(report.confusion.correct()) /
                      static_cast<double>(report.predictions);
    report.fallback_rate = static_cast<double>(report.fallbacks) /
                           static_cast<double>(report.predictions);
  }
  return reports;
}

std::vector<DensityRecord> sparsity_sweep(const SignedGraph& graph,
                                          std::span<const double> densities,
                                          const EvalOptions& options,
                                          std::size_t folds, std::uint64_t seed) {
  std::vector<DensityRecord> records;
  for (double density : densities) {
    const SignedGraph sparse = sparsify(graph, density, seed);
    const FoldPlan plan = make_folds(sparse, folds, seed);
    for (const EvalReport& r : evaluate(sparse, plan, options)) {
      records.push_back({density, r.model, sparse.edge_count(),
                         r.balanced.value, r.accuracy, r.fallback_rate});
    }
  }
  return records;
}

SampleCdf param_sample_cdf(const SignedGraph& graph, const FoldPlan& plan,
                           ModelKind model,
                           std::span<const std::uint64_t> thresholds) {
  if (model != ModelKind::kLtlgm && model != ModelKind::kLcgm) {
    throw ArgumentError("sample counts are defined for ltlgm and lcgm only");
  }
  check_plan(graph, plan);
  SampleCdf cdf;
  cdf.model = model;
  cdf.thresholds.assign(thresholds.begin(), thresholds.end());
  std::vector<std::uint64_t> below(thresholds.size(), 0);

  const std::vector<Edge> edges = graph.edges();
  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const FoldSplit split = split_fold(graph, edges, plan, fold);
    const SignedGraph& training = split.training;
    auto record = [&](std::uint64_t samples) {
      ++cdf.parameters;
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (samples < thresholds[t]) ++below[t];
      }
    };
    for (const Edge& q : split.test) {
      const Context ctx = context_of(training, {q.src, q.dst});
      for (const OutEntry& e : ctx.entries) {
        if (model == ModelKind::kLtlgm) {
          record(nam_count(training, q.dst, kAny, e.head, e.label));
        } else {
          for (std::size_t l = 0; l < training.label_count(); ++l) {
            record(nam_count(training, e.head, kAny, q.dst,
                             static_cast<Label>(l)));
          }
        }
      }
    }
  }
  for (std::uint64_t b : below) {
    cdf.fraction_below.push_back(
        cdf.parameters == 0 ? 0.0
                            : static_cast<double>(b) /
                                  static_cast<double>(cdf.parameters));
  }
  return cdf;
}

}  // namespace linklabel
