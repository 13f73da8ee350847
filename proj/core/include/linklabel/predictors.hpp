#pragma once

#include <string>
#include <vector>

#include "linklabel/cluster_counts.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/graph.hpp"
#include "linklabel/partition.hpp"

namespace linklabel {

enum class ModelKind { kPrior, kLtlgm, kLcgm, kGtlgm, kGcgm, kStlgm, kScgm };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);
// Global and smoothed models read cluster statistics.
bool needs_partition(ModelKind kind);

// How the number of local samples behind a smoothing weight is chosen.
//   support: the denominator of the local estimator being smoothed.
//   paper:   |T(x) ∩ T(j, l)| for the target-link model (label dependent,
//            blended vector renormalized) and |T(j) ∩ T(x, l_x)| for the
//            context model.
enum class LambdaMode { kPaper, kSupport };
enum class PriorMode { kUniform, kEmpirical };

std::string to_string(LambdaMode mode);
LambdaMode parse_lambda_mode(const std::string& text);
std::string to_string(PriorMode mode);
PriorMode parse_prior_mode(const std::string& text);

struct SmoothingConfig {
  double mu = 4.0;
  LambdaMode lambda_mode = LambdaMode::kSupport;
  // Laplace floor on the raw context-generator factors (LCGM, GCGM).
  double lcgm_floor_alpha = 1.0;
  PriorMode prior_mode = PriorMode::kUniform;

  void validate() const;
};

// Dirichlet weight on the background estimate: μ / (n + μ), and 1 when both
// are zero.
double dirichlet_lambda(double mu, double n);

enum class EntryStatus {
  kUsed,          // contributed to the result
  kLocalOnly,     // smoothed, no cluster evidence: purely local
  kGlobalOnly,    // smoothed, no local evidence: purely global
  kSkipped,       // no evidence at all; dropped from the average / product
};

struct EntryDiagnostic {
  NodeId head = 0;
  Label label = 0;
  EntryStatus status = EntryStatus::kUsed;
  // Local sample count and smoothing weight per target label (one value when
  // they do not depend on the label).
  std::vector<double> support;
  std::vector<double> lambda;
};

struct LabelDistribution {
  std::vector<double> probs;
  bool defined = false;
  // Context entries that contributed; 0 means the output carries no
  // evidence beyond the prior.
  std::size_t evidence = 0;
  std::vector<EntryDiagnostic> entries;

  static LabelDistribution undefined(std::size_t labels) {
    return {std::vector<double>(labels, 0.0), false, 0, {}};
  }
};

// Fraction of edges carrying each label.
LabelDistribution class_prior(const SignedGraph& graph);

// Read-only bundle every predictor draws from. `partition` and
// `cluster_counts` may be null for local models.
struct ModelInputs {
  const SignedGraph& graph;
  const CooccurrenceCounts& counts;
  const Partition* partition = nullptr;
  const ClusterCounts* cluster_counts = nullptr;
  SmoothingConfig config;
  LabelDistribution prior;  // class prior of the training graph

  ModelInputs(const SignedGraph& g, const CooccurrenceCounts& c,
              const Partition* p, const ClusterCounts* cc,
              SmoothingConfig cfg);
};

LabelDistribution predict_ltlgm(const ModelInputs& in, PredictionQuery q);
LabelDistribution predict_lcgm(const ModelInputs& in, PredictionQuery q);
LabelDistribution predict_gtlgm(const ModelInputs& in, PredictionQuery q);
LabelDistribution predict_gcgm(const ModelInputs& in, PredictionQuery q);
LabelDistribution predict_stlgm(const ModelInputs& in, PredictionQuery q);
LabelDistribution predict_scgm(const ModelInputs& in, PredictionQuery q);

LabelDistribution predict(const ModelInputs& in, ModelKind kind,
                          PredictionQuery q);

struct Decision {
  Label label = 0;
  bool used_fallback = false;
};

// Argmax; an undefined distribution is replaced by the prior. Ties go to the
// label with the higher prior, then to the lower label index.
Decision decide(const LabelDistribution& dist, const LabelDistribution& prior);

}  // namespace linklabel
