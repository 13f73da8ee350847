#include "linklabel/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace linklabel {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPrior: return "prior";
    case ModelKind::kLtlgm: return "ltlgm";
    case ModelKind::kLcgm: return "lcgm";
    case ModelKind::kGtlgm: return "gtlgm";
    case ModelKind::kGcgm: return "gcgm";
    case ModelKind::kStlgm: return "stlgm";
    case ModelKind::kScgm: return "scgm";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(c)));
  for (ModelKind k : {ModelKind::kPrior, ModelKind::kLtlgm, ModelKind::kLcgm,
                      ModelKind::kGtlgm, ModelKind::kGcgm, ModelKind::kStlgm,
                      ModelKind::kScgm}) {
    if (to_string(k) == lower) return k;
  }
  throw ArgumentError("unknown model '" + text + "'");
}

bool needs_partition(ModelKind kind) {
  return kind == ModelKind::kGtlgm || kind == ModelKind::kGcgm ||
         kind == ModelKind::kStlgm || kind == ModelKind::kScgm;
}

std::string to_string(LambdaMode mode) {
  return mode == LambdaMode::kPaper ? "paper" : "support";
}

LambdaMode parse_lambda_mode(const std::string& text) {
  if (text == "paper") return LambdaMode::kPaper;
  if (text == "support") return LambdaMode::kSupport;
  throw ArgumentError("unknown lambda mode '" + text + "'");
}

std::string to_string(PriorMode mode) {
  return mode == PriorMode::kUniform ? "uniform" : "empirical";
}

PriorMode parse_prior_mode(const std::string& text) {
  if (text == "uniform") return PriorMode::kUniform;
  if (text == "empirical") return PriorMode::kEmpirical;
  throw ArgumentError("unknown prior mode '" + text + "'");
}

void SmoothingConfig::validate() const {
  if (!(mu >= 0.0)) throw ArgumentError("mu must be non-negative");
  if (!(lcgm_floor_alpha >= 0.0)) {
    throw ArgumentError("lcgm floor alpha must be non-negative");
  }
}

double dirichlet_lambda(double mu, double n) {
  if (n + mu <= 0.0) return 1.0;
  return mu / (n + mu);
}

LabelDistribution class_prior(const SignedGraph& graph) {
  if (graph.edge_count() == 0) {
    throw ArgumentError("class prior of a graph without edges");
  }
  LabelDistribution d;
  d.defined = true;
  const auto total = static_cast<double>(graph.edge_count());
  for (std::size_t c : graph.label_counts()) {
    d.probs.push_back(static_cast<double>(c) / total);
  }
  return d;
}

ModelInputs::ModelInputs(const SignedGraph& g, const CooccurrenceCounts& c,
                         const Partition* p, const ClusterCounts* cc,
                         SmoothingConfig cfg)
    : graph(g),
      counts(c),
      partition(p),
      cluster_counts(cc),
      config(cfg),
      prior(class_prior(g)) {
  config.validate();
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double as_double(std::uint64_t v) { return static_cast<double>(v); }

std::vector<double> prior_scores(const ModelInputs& in) {
  const std::size_t labels = in.graph.label_count();
  std::vector<double> scores(labels);
  for (std::size_t l = 0; l < labels; ++l) {
    const double p = in.config.prior_mode == PriorMode::kUniform
                         ? 1.0 / static_cast<double>(labels)
                         : in.prior.probs[l];
    scores[l] = p > 0.0 ? std::log(p) : kNegInf;
  }
  return scores;
}

LabelDistribution from_log_scores(const std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  if (top == kNegInf) return LabelDistribution::undefined(scores.size());
  LabelDistribution d;
  d.defined = true;
  d.probs.resize(scores.size());
  double sum = 0.0;
  for (std::size_t l = 0; l < scores.size(); ++l) {
    d.probs[l] = std::exp(scores[l] - top);
    sum += d.probs[l];
  }
  for (double& p : d.probs) p /= sum;
  return d;
}

LabelDistribution average(const std::vector<double>& sum, std::size_t used,
                          std::vector<EntryDiagnostic> entries) {
  if (used == 0) {
    auto d = LabelDistribution::undefined(sum.size());
    d.entries = std::move(entries);
    return d;
  }
  LabelDistribution d;
  d.defined = true;
  d.evidence = used;
  d.probs = sum;
  for (double& p : d.probs) p /= static_cast<double>(used);
  d.entries = std::move(entries);
  return d;
}

struct ClusterView {
  ClusterId s;   // initiator's cluster
  ClusterId cj;  // receiver's cluster
};

ClusterView cluster_view(const ModelInputs& in, PredictionQuery q) {
  if (in.partition == nullptr || in.cluster_counts == nullptr) {
    throw ArgumentError("global and smoothed models need a partition");
  }
  return {in.partition->cluster_of(q.initiator),
          in.partition->cluster_of(q.receiver)};
}

// |T(j, l) ∩ T(x, l_x)| / |T(j) ∩ T(x, l_x)|. Returns the denominator; the
// term is undefined when it is zero.
std::uint64_t local_target_term(const ModelInputs& in, NodeId j, OutEntry e,
                                std::vector<double>& term) {
  const std::uint64_t den = in.counts.count(j, kAny, e.head, e.label);
  if (den == 0) return 0;
  for (std::size_t l = 0; l < term.size(); ++l) {
    term[l] = as_double(in.counts.count(j, static_cast<Label>(l), e.head,
                                        e.label)) /
              as_double(den);
  }
  return den;
}

// Cluster-level analogue, renormalized over l because one node may carry
// several labels into the receiver's cluster.
bool global_target_term(const ModelInputs& in, ClusterView cv, OutEntry e,
                        std::vector<double>& term) {
  const ClusterCounts& cc = *in.cluster_counts;
  const ClusterId cx = in.partition->cluster_of(e.head);
  if (cc.count(cv.s, cx, e.label, cv.cj, kAny) == 0) return false;
  double sum = 0.0;
  for (std::size_t l = 0; l < term.size(); ++l) {
    term[l] = cc.count(cv.s, cx, e.label, cv.cj, static_cast<Label>(l));
    sum += term[l];
  }
  for (double& t : term) t /= sum;
  return true;
}

struct FactorCounts {
  std::vector<double> num;
  std::vector<double> den;
};

// Numerators |T(j, l) ∩ T(x, l_x)| and denominators |T(x) ∩ T(j, l)|.
void local_context_counts(const ModelInputs& in, NodeId j, OutEntry e,
                          FactorCounts& f) {
  for (std::size_t l = 0; l < f.num.size(); ++l) {
    const auto lab = static_cast<Label>(l);
    f.num[l] = as_double(in.counts.count(j, lab, e.head, e.label));
    f.den[l] = as_double(in.counts.count(e.head, kAny, j, lab));
  }
}

void global_context_counts(const ModelInputs& in, ClusterView cv, OutEntry e,
                           FactorCounts& f) {
  const ClusterCounts& cc = *in.cluster_counts;
  const ClusterId cx = in.partition->cluster_of(e.head);
  for (std::size_t l = 0; l < f.num.size(); ++l) {
    const auto lab = static_cast<Label>(l);
    f.num[l] = cc.count(cv.s, cx, e.label, cv.cj, lab);
    f.den[l] = cc.count(cv.s, cx, kAny, cv.cj, lab);
  }
}

// Shared body of the raw context-generator models: a floored product of
// per-entry factors with the prior, in log space.
template <class CountsFn>
LabelDistribution context_generator(const ModelInputs& in, PredictionQuery q,
                                    CountsFn&& fill) {
  const Context ctx = context_of(in.graph, q);
  const std::size_t labels = in.graph.label_count();
  const double alpha = in.config.lcgm_floor_alpha;
  std::vector<double> scores = prior_scores(in);
  FactorCounts f{std::vector<double>(labels), std::vector<double>(labels)};
  std::vector<EntryDiagnostic> diag;
  std::size_t used = 0;
  for (const OutEntry& e : ctx.entries) {
    fill(e, f);
    EntryDiagnostic d{e.head, e.label, EntryStatus::kUsed, f.den, {}};
    const double floor_den = alpha * static_cast<double>(labels);
    bool skip = false;
    for (std::size_t l = 0; l < labels; ++l) {
      if (f.den[l] + floor_den <= 0.0) skip = true;
    }
    if (skip) {
      d.status = EntryStatus::kSkipped;
    } else {
      for (std::size_t l = 0; l < labels; ++l) {
        scores[l] += std::log((f.num[l] + alpha) / (f.den[l] + floor_den));
      }
      ++used;
    }
    diag.push_back(std::move(d));
  }
  LabelDistribution out = from_log_scores(scores);
  out.evidence = used;
  out.entries = std::move(diag);
  return out;
}

}  // namespace

LabelDistribution predict_ltlgm(const ModelInputs& in, PredictionQuery q) {
  const Context ctx = context_of(in.graph, q);
  const std::size_t labels = in.graph.label_count();
  std::vector<double> sum(labels, 0.0), term(labels);
  std::vector<EntryDiagnostic> diag;
  std::size_t used = 0;
  for (const OutEntry& e : ctx.entries) {
    const std::uint64_t den = local_target_term(in, q.receiver, e, term);
    EntryDiagnostic d{e.head, e.label, EntryStatus::kUsed, {as_double(den)}, {}};
    if (den == 0) {
      d.status = EntryStatus::kSkipped;
    } else {
      for (std::size_t l = 0; l < labels; ++l) sum[l] += term[l];
      ++used;
    }
    diag.push_back(std::move(d));
  }
  return average(sum, used, std::move(diag));
}

LabelDistribution predict_gtlgm(const ModelInputs& in, PredictionQuery q) {
  const ClusterView cv = cluster_view(in, q);
  const Context ctx = context_of(in.graph, q);
  const std::size_t labels = in.graph.label_count();
  std::vector<double> sum(labels, 0.0), term(labels);
  std::vector<EntryDiagnostic> diag;
  std::size_t used = 0;
  for (const OutEntry& e : ctx.entries) {
    EntryDiagnostic d{e.head, e.label, EntryStatus::kUsed, {}, {}};
    if (global_target_term(in, cv, e, term)) {
      for (std::size_t l = 0; l < labels; ++l) sum[l] += term[l];
      ++used;
    } else {
      d.status = EntryStatus::kSkipped;
    }
    diag.push_back(std::move(d));
  }
  return average(sum, used, std::move(diag));
}

LabelDistribution predict_lcgm(const ModelInputs& in, PredictionQuery q) {
  return context_generator(in, q, [&](OutEntry e, FactorCounts& f) {
    local_context_counts(in, q.receiver, e, f);
  });
}

LabelDistribution predict_gcgm(const ModelInputs& in, PredictionQuery q) {
  const ClusterView cv = cluster_view(in, q);
  return context_generator(in, q, [&](OutEntry e, FactorCounts& f) {
    global_context_counts(in, cv, e, f);
  });
}

LabelDistribution predict_stlgm(const ModelInputs& in, PredictionQuery q) {
  const ClusterView cv = cluster_view(in, q);
  const Context ctx = context_of(in.graph, q);
  const std::size_t labels = in.graph.label_count();
  const bool paper = in.config.lambda_mode == LambdaMode::kPaper;
  std::vector<double> sum(labels, 0.0), local(labels), global(labels),
      blended(labels);
  std::vector<EntryDiagnostic> diag;
  std::size_t used = 0;
  for (const OutEntry& e : ctx.entries) {
    const std::uint64_t den = local_target_term(in, q.receiver, e, local);
    const bool has_local = den > 0;
    const bool has_global = global_target_term(in, cv, e, global);
    EntryDiagnostic d{e.head, e.label, EntryStatus::kUsed, {}, {}};
    if (!has_local && !has_global) {
      d.status = EntryStatus::kSkipped;
      d.support = {0.0};
      diag.push_back(std::move(d));
      continue;
    }
    if (!has_local) d.status = EntryStatus::kGlobalOnly;
    if (!has_global) d.status = EntryStatus::kLocalOnly;
    double total = 0.0;
    for (std::size_t l = 0; l < labels; ++l) {
      const double n =
          paper ? as_double(in.counts.count(e.head, kAny, q.receiver,
                                            static_cast<Label>(l)))
                : as_double(den);
      const double lambda = !has_local    ? 1.0
                            : !has_global ? 0.0
                                          : dirichlet_lambda(in.config.mu, n);
      if (paper || l == 0) {
        d.support.push_back(n);
        d.lambda.push_back(lambda);
      }
      blended[l] = lambda == 1.0   ? global[l]
                   : lambda == 0.0 ? local[l]
                                   : (1.0 - lambda) * local[l] + lambda * global[l];
      total += blended[l];
    }
    if (paper) {
      if (total <= 0.0) {
        d.status = EntryStatus::kSkipped;
        diag.push_back(std::move(d));
        continue;
      }
      for (double& b : blended) b /= total;
    }
    for (std::size_t l = 0; l < labels; ++l) sum[l] += blended[l];
    ++used;
    diag.push_back(std::move(d));
  }
  return average(sum, used, std::move(diag));
}

LabelDistribution predict_scgm(const ModelInputs& in, PredictionQuery q) {
  const ClusterView cv = cluster_view(in, q);
  const Context ctx = context_of(in.graph, q);
  const std::size_t labels = in.graph.label_count();
  const bool paper = in.config.lambda_mode == LambdaMode::kPaper;
  std::vector<double> scores = prior_scores(in);
  FactorCounts loc{std::vector<double>(labels), std::vector<double>(labels)};
  FactorCounts glob{std::vector<double>(labels), std::vector<double>(labels)};
  std::vector<EntryDiagnostic> diag;
  std::size_t used = 0;
  for (const OutEntry& e : ctx.entries) {
    local_context_counts(in, q.receiver, e, loc);
    global_context_counts(in, cv, e, glob);
    EntryDiagnostic d{e.head, e.label, EntryStatus::kUsed, {}, {}};
    bool skip = false;
    bool any_local = false;
    bool any_global = false;
    for (std::size_t l = 0; l < labels; ++l) {
      if (loc.den[l] == 0.0 && glob.den[l] == 0.0) skip = true;
      any_local = any_local || loc.den[l] > 0.0;
      any_global = any_global || glob.den[l] > 0.0;
    }
    if (skip) {
      d.status = EntryStatus::kSkipped;
      d.support = loc.den;
      diag.push_back(std::move(d));
      continue;
    }
    if (!any_local) d.status = EntryStatus::kGlobalOnly;
    if (!any_global) d.status = EntryStatus::kLocalOnly;
    const double shared_n =
        paper ? as_double(in.counts.count(q.receiver, kAny, e.head, e.label))
              : 0.0;
    for (std::size_t l = 0; l < labels; ++l) {
      const bool has_local = loc.den[l] > 0.0;
      const bool has_global = glob.den[l] > 0.0;
      const double n = paper ? shared_n : loc.den[l];
      const double lambda = !has_local    ? 1.0
                            : !has_global ? 0.0
                                          : dirichlet_lambda(in.config.mu, n);
      d.support.push_back(n);
      d.lambda.push_back(lambda);
      const double p_local = has_local ? loc.num[l] / loc.den[l] : 0.0;
      const double p_global = has_global ? glob.num[l] / glob.den[l] : 0.0;
      const double p = lambda == 1.0   ? p_global
                       : lambda == 0.0 ? p_local
                                       : (1.0 - lambda) * p_local + lambda * p_global;
      scores[l] += p > 0.0 ? std::log(p) : kNegInf;
    }
    ++used;
    diag.push_back(std::move(d));
  }
  LabelDistribution out = from_log_scores(scores);
  out.evidence = used;
  out.entries = std::move(diag);
  return out;
}

LabelDistribution predict(const ModelInputs& in, ModelKind kind,
                          PredictionQuery q) {
  switch (kind) {
    case ModelKind::kPrior: {
      validate_query(in.graph, q);
      LabelDistribution d = in.prior;
      d.evidence = 0;
      return d;
    }
    case ModelKind::kLtlgm: return predict_ltlgm(in, q);
    case ModelKind::kLcgm: return predict_lcgm(in, q);
    case ModelKind::kGtlgm: return predict_gtlgm(in, q);
    case ModelKind::kGcgm: return predict_gcgm(in, q);
    case ModelKind::kStlgm: return predict_stlgm(in, q);
    case ModelKind::kScgm: return predict_scgm(in, q);
  }
  throw ArgumentError("unknown model kind");
}

Decision decide(const LabelDistribution& dist, const LabelDistribution& prior) {
  if (!prior.defined) throw ArgumentError("decision needs a defined prior");
  const bool fallback = !dist.defined;
  const std::vector<double>& p = fallback ? prior.probs : dist.probs;
  Label best = 0;
  for (std::size_t l = 1; l < p.size(); ++l) {
    if (p[l] > p[best] ||
        (p[l] == p[best] && prior.probs[l] > prior.probs[best])) {
      best = static_cast<Label>(l);
    }
  }
  return {best, fallback};
}

}  // namespace linklabel
