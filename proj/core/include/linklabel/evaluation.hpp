#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "linklabel/clustering.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/graph.hpp"
#include "linklabel/predictors.hpp"

namespace linklabel {

// Assignment of every edge (in SignedGraph::edges() order) to one of k folds.
struct FoldPlan {
  std::size_t k = 10;
  std::uint64_t seed = 1;
  bool stratified = false;
  std::vector<std::uint32_t> fold_of_edge;

  std::size_t fold_size(std::size_t fold) const;
};

// Random permutation dealt round-robin. Stratified plans deal each label's
// edges in turn, continuing the rotation, so fold sizes still differ by <= 1.
FoldPlan make_folds(const SignedGraph& graph, std::size_t k, std::uint64_t seed,
                    bool stratified = false);

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t labels)
      : labels_(labels), counts_(labels * labels, 0) {}

  void add(Label truth, Label predicted, std::uint64_t n = 1) {
    counts_[static_cast<std::size_t>(truth) * labels_ + predicted] += n;
  }
  std::uint64_t at(Label truth, Label predicted) const {
    return counts_[static_cast<std::size_t>(truth) * labels_ + predicted];
  }
  std::size_t labels() const { return labels_; }
  std::uint64_t truth_count(Label truth) const;
  std::uint64_t total() const;
  std::uint64_t correct() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t labels_;
  std::vector<std::uint64_t> counts_;
};

struct BalancedAccuracy {
  double value = 0.0;
  // True-positive rate per class; empty for classes absent from the truth.
  std::vector<std::optional<double>> tpr;
  std::vector<Label> excluded;
};

// Mean true-positive rate over the classes that occur in the truth. The mean
// is formed as an exact fraction before the one rounding to double.
BalancedAccuracy balanced_accuracy(const ConfusionMatrix& confusion);

struct EvalOptions {
  std::vector<ModelKind> models = {ModelKind::kStlgm};
  SmoothingConfig smoothing;
  ClusterConfig clustering;
  // Cluster once on the full graph instead of per training fold. Faster, but
  // the test edges then shape the partition.
  bool reuse_clustering = false;
  // Per-fold co-occurrence strategy; results are identical either way.
  bool precompute_nam = false;
  NamBuildOptions nam;
  std::size_t threads = 1;
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t test_edges = 0;
  double balanced_accuracy = 0.0;
  std::size_t fallbacks = 0;
  double phi = 0.0;  // final clustering objective, 0 for local models
};

struct EvalReport {
  ModelKind model = ModelKind::kPrior;
  ConfusionMatrix confusion{2};
  BalancedAccuracy balanced;
  double accuracy = 0.0;
  std::uint64_t predictions = 0;
  // Predictions made without any evidence beyond the class prior.
  std::uint64_t fallbacks = 0;
  double fallback_rate = 0.0;
  std::vector<FoldResult> folds;
};

// k-fold cross-validation: for each fold the training graph keeps every
// other edge over the full node set, global models are clustered on it, and
// each held-out edge is predicted from its initiator's remaining context.
// One report per requested model, in request order.
std::vector<EvalReport> evaluate(const SignedGraph& graph, const FoldPlan& plan,
                                 const EvalOptions& options);

struct DensityRecord {
  double density = 1.0;
  ModelKind model = ModelKind::kPrior;
  std::size_t edges = 0;
  double balanced_accuracy = 0.0;
  double accuracy = 0.0;
  double fallback_rate = 0.0;
};

// For each density: sparsify with `seed`, fold with `seed`, evaluate.
std::vector<DensityRecord> sparsity_sweep(const SignedGraph& graph,
                                          std::span<const double> densities,
                                          const EvalOptions& options,
                                          std::size_t folds, std::uint64_t seed);

struct SampleCdf {
  ModelKind model = ModelKind::kLtlgm;
  std::uint64_t parameters = 0;
  std::vector<std::uint64_t> thresholds;
  // Fraction of parameters estimated from fewer than thresholds[i] samples.
  std::vector<double> fraction_below;
};

// Sample counts behind each local parameter over every held-out query: the
// target-link denominator |T(j) ∩ T(x, l_x)| per context entry for LTLGM,
// the context-generator denominator |T(x) ∩ T(j, l)| per entry and label
// for LCGM.
SampleCdf param_sample_cdf(const SignedGraph& graph, const FoldPlan& plan,
                           ModelKind model,
                           std::span<const std::uint64_t> thresholds);

}  // namespace linklabel
