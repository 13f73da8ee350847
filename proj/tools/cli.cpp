#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linklabel/cluster_counts.hpp"
#include "linklabel/clustering.hpp"
#include "linklabel/counts.hpp"
#include "linklabel/evaluation.hpp"
#include "linklabel/graph.hpp"
#include "linklabel/io.hpp"
#include "linklabel/planted.hpp"
#include "linklabel/predictors.hpp"
#include "linklabel/streaming.hpp"

namespace linklabel::cli {
namespace {

using json = nlohmann::ordered_json;

const std::vector<std::string> kModelNames = {"prior", "ltlgm", "lcgm", "gtlgm",
                                              "gcgm",  "stlgm", "scgm"};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

LoadOptions load_options(const RunConfig& c) {
  if (c.labels.empty()) return LoadOptions::signed_default();
  return LoadOptions::named(LabelAlphabet(split(c.labels, ',')));
}

SmoothingConfig smoothing_config(const RunConfig& c) {
  SmoothingConfig s;
  s.mu = c.mu;
  s.lambda_mode = parse_lambda_mode(c.lambda_mode);
  s.lcgm_floor_alpha = c.lcgm_floor_alpha;
  s.prior_mode = parse_prior_mode(c.prior_mode);
  s.validate();
  return s;
}

ClusterConfig cluster_config(const RunConfig& c) {
  ClusterConfig cc;
  cc.k = c.clusters;
  cc.max_sweeps = c.max_sweeps;
  cc.scan = parse_scan_order(c.scan);
  cc.temperature = c.temperature;
  cc.greedy = c.greedy;
  cc.seed = c.seed;
  cc.early_stop_rel_tol = c.early_stop_tol;
  cc.restarts = c.restarts;
  cc.validate();
  return cc;
}

NamBuildOptions nam_options(const RunConfig& c) {
  NamBuildOptions o;
  o.budget = c.nam_budget;
  o.override_budget = c.nam_override;
  return o;
}

std::vector<ModelKind> model_kinds(const std::vector<std::string>& names) {
  std::vector<ModelKind> kinds;
  for (const auto& n : names) kinds.push_back(parse_model_kind(n));
  return kinds;
}

json echo(const RunConfig& c) {
  json j;
  j["type"] = "config";
  j["command"] = c.command;
  j["labels"] = c.labels.empty() ? std::vector<std::string>{"+", "-"}
                                 : split(c.labels, ',');
  j["models"] = c.command == "samples-cdf" ? c.cdf_models : c.models;
  j["mu"] = c.mu;
  j["lambda_mode"] = c.lambda_mode;
  j["lcgm_floor_alpha"] = c.lcgm_floor_alpha;
  j["prior_mode"] = c.prior_mode;
  j["clusters"] = c.clusters;
  j["scan"] = c.scan;
  j["temperature"] = c.temperature;
  j["greedy"] = c.greedy;
  j["max_sweeps"] = c.max_sweeps;
  j["restarts"] = c.restarts;
  j["early_stop_tol"] = c.early_stop_tol;
  j["reuse_clustering"] = c.reuse_clustering;
  j["folds"] = c.folds;
  j["stratified"] = c.stratified;
  j["densities"] = c.densities;
  j["thresholds"] = c.thresholds;
  j["nam"] = c.nam;
  j["nam_budget"] = c.nam_budget;
  j["nam_override"] = c.nam_override;
  j["auto_intern"] = c.auto_intern;
  if (c.command == "generate") {
    j["nodes"] = c.nodes;
    j["roles"] = c.roles;
    j["edge_prob"] = c.edge_prob;
    j["noise"] = c.noise;
  }
  j["seed"] = c.seed;
  json inputs = json::array();
  auto add = [&](const char* role, const std::string& path) {
    if (!path.empty()) {
      inputs.push_back({{"role", role}, {"path", path},
                        {"sha256", file_digest(path)}});
    }
  };
  add("input", c.input);
  add("queries", c.queries);
  add("batch", c.batch);
  add("partition", c.partition_in);
  add("config", c.config_file);
  j["inputs"] = inputs;
  return j;
}

class Sink {
 public:
  explicit Sink(std::ostream& os) : os_(os) {}
  void emit(const json& record) { os_ << record.dump() << '\n'; }

 private:
  std::ostream& os_;
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void print_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) os << "  ";
      if (i == 0) {
        os << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
      } else {
        os << std::right << std::setw(static_cast<int>(width[i])) << cells[i];
      }
    }
    os << '\n';
  };
  line(header);
  std::size_t total = 2 * (header.size() - 1);
  for (std::size_t w : width) total += w;
  os << std::string(total, '-') << '\n';
  for (const auto& row : rows) line(row);
}

json distribution_json(const LabelDistribution& d, const LabelAlphabet& a) {
  json probs = json::object();
  for (std::size_t l = 0; l < d.probs.size(); ++l) {
    probs[a.name(static_cast<Label>(l))] = d.probs[l];
  }
  return probs;
}

std::string status_name(EntryStatus s) {
  switch (s) {
    case EntryStatus::kUsed: return "used";
    case EntryStatus::kLocalOnly: return "local-only";
    case EntryStatus::kGlobalOnly: return "global-only";
    case EntryStatus::kSkipped: return "skipped";
  }
  return "?";
}

// Cluster the graph, or read a partition when one was supplied.
Partition obtain_partition(const RunConfig& c, const SignedGraph& graph,
                           Sink& sink) {
  if (!c.partition_in.empty()) return load_partition(c.partition_in, graph);
  ClusterResult r = cluster(graph, cluster_config(c));
  assign_isolated_to_largest(graph, r.partition);
  sink.emit({{"type", "clustering"},
             {"k", r.partition.k()},
             {"phi", r.partition.objective()},
             {"restart", r.restart},
             {"sweeps", r.trace.size()}});
  return std::move(r.partition);
}

// Reads `src dst sign` lines into external edges.
std::vector<ExternalEdge> load_batch(const std::string& path,
                                     const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open batch file '" + path + "'");
  std::vector<ExternalEdge> edges;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream fields(text);
    std::string src, dst, sign, extra;
    if (!(fields >> src)) continue;
    if (src[0] == '#') continue;
    if (!(fields >> dst >> sign) || (fields >> extra)) {
      throw ParseError(line, "expected 'src dst sign'");
    }
    auto it = options.tokens.find(sign);
    if (it == options.tokens.end()) {
      throw ParseError(line, "unknown sign token '" + sign + "'");
    }
    edges.push_back({src, dst, it->second});
  }
  return edges;
}

int cmd_stats(const RunConfig& c, Sink& sink, std::ostream& err) {
  const LoadOptions options = load_options(c);
  const LoadedGraph loaded = load_edge_list(c.input, options);
  const GraphStats st = compute_stats(loaded.graph);
  const LoadReport& rep = loaded.report;
  const LabelAlphabet& a = loaded.graph.alphabet();

  json labels = json::array();
  json raw_labels = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double raw_share =
        rep.data_lines == 0 ? 0.0
                            : static_cast<double>(rep.raw_label_counts[l]) /
                                  static_cast<double>(rep.data_lines);
    labels.push_back({{"label", a.name(static_cast<Label>(l))},
                      {"edges", st.label_counts[l]},
                      {"share", st.label_shares[l]}});
    raw_labels.push_back({{"label", a.name(static_cast<Label>(l))},
                          {"lines", rep.raw_label_counts[l]},
                          {"share", raw_share}});
    rows.push_back({"label " + a.name(static_cast<Label>(l)),
                    std::to_string(rep.raw_label_counts[l]),
                    fixed(100.0 * raw_share, 1) + "%",
                    std::to_string(st.label_counts[l]),
                    fixed(100.0 * st.label_shares[l], 1) + "%"});
  }
  sink.emit({{"type", "stats"},
             {"nodes", st.node_count},
             {"edges", st.edge_count},
             {"labels", labels},
             {"raw", {{"data_lines", rep.data_lines},
                      {"comment_lines", rep.comment_lines},
                      {"declared_nodes", rep.declared_nodes},
                      {"self_loops_dropped", rep.self_loops_dropped},
                      {"duplicates_collapsed", rep.duplicates_collapsed},
                      {"labels", raw_labels}}}});
  if (!c.quiet) {
    rows.insert(rows.begin(),
                {"edges", std::to_string(rep.data_lines), "",
                 std::to_string(st.edge_count), ""});
    rows.insert(rows.begin(),
                {"nodes", "", "", std::to_string(st.node_count), ""});
    print_table(err, {"", "raw", "share", "normalized", "share"}, rows);
    err << "dropped " << rep.self_loops_dropped << " self-loops, collapsed "
        << rep.duplicates_collapsed << " duplicate pairs\n";
  }
  return 0;
}

int cmd_cluster(const RunConfig& c, Sink& sink, std::ostream& err) {
  const ClusterConfig cc = cluster_config(c);
  const LoadedGraph loaded = load_edge_list(c.input, load_options(c));
  const ClusterResult r = cluster(loaded.graph, cc);
  for (const SweepRecord& s : r.trace) {
    sink.emit({{"type", "sweep"}, {"sweep", s.sweep}, {"phi", s.phi},
               {"moves", s.moves}});
  }
  std::vector<std::size_t> sizes;
  for (ClusterId k = 0; k < r.partition.k(); ++k) {
    sizes.push_back(r.partition.cluster_size(k));
  }
  sink.emit({{"type", "cluster"},
             {"k", r.partition.k()},
             {"initial_phi", r.initial_phi},
             {"phi", r.partition.objective()},
             {"restart", r.restart},
             {"restart_phis", r.restart_phis},
             {"cluster_sizes", sizes}});
  if (!c.partition_out.empty()) {
    save_partition(c.partition_out, loaded.graph, r.partition);
  }
  if (!c.quiet) {
    std::vector<std::vector<std::string>> rows;
    for (const SweepRecord& s : r.trace) {
      rows.push_back({std::to_string(s.sweep), fixed(s.phi),
                      std::to_string(s.moves)});
    }
    print_table(err, {"sweep", "phi", "moves"}, rows);
    err << "best restart " << r.restart << ", phi "
        << fixed(r.partition.objective()) << '\n';
  }
  return 0;
}

int cmd_predict(const RunConfig& c, Sink& sink, std::ostream& err) {
  const SmoothingConfig smoothing = smoothing_config(c);
  const std::vector<ModelKind> kinds = model_kinds(c.models);
  const LoadedGraph loaded = load_edge_list(c.input, load_options(c));
  const std::vector<PredictionQuery> queries =
      load_queries(c.queries, loaded.graph);

  // A queried edge must not be visible to the model that predicts it.
  std::set<std::pair<NodeId, NodeId>> asked;
  for (const PredictionQuery& q : queries) {
    validate_query(loaded.graph, q);
    asked.insert({q.initiator, q.receiver});
  }
  std::vector<Edge> kept;
  std::size_t held_out = 0;
  for (const Edge& e : loaded.graph.edges()) {
    if (asked.count({e.src, e.dst})) {
      ++held_out;
    } else {
      kept.push_back(e);
    }
  }
  const SignedGraph graph =
      held_out == 0 ? loaded.graph : loaded.graph.with_edges(kept);
  if (held_out > 0) {
    sink.emit({{"type", "held_out"}, {"edges", held_out}});
  }

  std::optional<Partition> partition;
  std::optional<ClusterCounts> cluster_counts;
  if (std::any_of(kinds.begin(), kinds.end(), needs_partition)) {
    partition = obtain_partition(c, graph, sink);
    cluster_counts.emplace(graph, *partition);
  }
  const CooccurrenceCounts counts =
      c.nam == "precomputed"
          ? CooccurrenceCounts::precompute(graph, nam_options(c))
          : CooccurrenceCounts(graph);
  const LabelAlphabet& a = graph.alphabet();

  std::vector<std::vector<std::string>> rows;
  for (const PredictionQuery& q : queries) {
    for (ModelKind kind : kinds) {
      const bool global = needs_partition(kind);
      const ModelInputs inputs(graph, counts, global ? &*partition : nullptr,
                               global ? &*cluster_counts : nullptr, smoothing);
      const LabelDistribution dist = predict(inputs, kind, q);
      const Decision d = decide(dist, inputs.prior);
      json rec = {{"type", "prediction"},
                  {"model", to_string(kind)},
                  {"src", graph.external_id(q.initiator)},
                  {"dst", graph.external_id(q.receiver)},
                  {"label", a.name(d.label)},
                  {"probs", distribution_json(d.used_fallback ? inputs.prior
                                                              : dist, a)},
                  {"defined", dist.defined},
                  {"fallback", d.used_fallback || dist.evidence == 0},
                  {"evidence", dist.evidence}};
      if (c.verbose) {
        json entries = json::array();
        for (const EntryDiagnostic& e : dist.entries) {
          entries.push_back({{"head", graph.external_id(e.head)},
                             {"label", a.name(e.label)},
                             {"status", status_name(e.status)},
                             {"support", e.support},
                             {"lambda", e.lambda}});
        }
        rec["entries"] = entries;
      }
      sink.emit(rec);
      rows.push_back({graph.external_id(q.initiator),
                      graph.external_id(q.receiver), to_string(kind),
                      a.name(d.label),
                      fixed(d.used_fallback ? inputs.prior.probs[d.label]
                                            : dist.probs[d.label]),
                      d.used_fallback ? "prior" : ""});
    }
  }
  if (!c.quiet) {
    print_table(err, {"src", "dst", "model", "label", "p", "fallback"}, rows);
  }
  return 0;
}

EvalOptions eval_options(const RunConfig& c) {
  EvalOptions o;
  o.models = model_kinds(c.models);
  o.smoothing = smoothing_config(c);
  if (std::any_of(o.models.begin(), o.models.end(), needs_partition)) {
    o.clustering = cluster_config(c);
  } else {
    o.clustering.seed = c.seed;
  }
  o.reuse_clustering = c.reuse_clustering;
  o.precompute_nam = c.nam == "precomputed";
  o.nam = nam_options(c);
  o.threads = c.threads;
  return o;
}

int cmd_evaluate(const RunConfig& c, Sink& sink, std::ostream& err) {
  const EvalOptions options = eval_options(c);
  const LoadedGraph loaded = load_edge_list(c.input, load_options(c));
  const SignedGraph& graph = loaded.graph;
  const FoldPlan plan = make_folds(graph, c.folds, c.seed, c.stratified);
  const std::vector<EvalReport> reports = evaluate(graph, plan, options);
  const LabelAlphabet& a = graph.alphabet();

  std::vector<std::vector<std::string>> rows;
  for (const EvalReport& r : reports) {
    for (const FoldResult& f : r.folds) {
      sink.emit({{"type", "fold"},
                 {"model", to_string(r.model)},
                 {"fold", f.fold},
                 {"test_edges", f.test_edges},
                 {"balanced_accuracy", f.balanced_accuracy},
                 {"fallbacks", f.fallbacks},
                 {"phi", f.phi}});
    }
    json confusion = json::array();
    json tpr = json::array();
    json excluded = json::array();
    for (std::size_t t = 0; t < a.size(); ++t) {
      json row = json::array();
      for (std::size_t p = 0; p < a.size(); ++p) {
        row.push_back(r.confusion.at(static_cast<Label>(t), static_cast<Label>(p)));
      }
      confusion.push_back(row);
      if (r.balanced.tpr[t]) {
        tpr.push_back(*r.balanced.tpr[t]);
      } else {
        tpr.push_back(nullptr);
      }
    }
    for (Label l : r.balanced.excluded) excluded.push_back(a.name(l));
    sink.emit({{"type", "report"},
               {"model", to_string(r.model)},
               {"confusion", confusion},
               {"per_class_tpr", tpr},
               {"excluded_classes", excluded},
               {"balanced_accuracy", r.balanced.value},
               {"accuracy", r.accuracy},
               {"predictions", r.predictions},
               {"fallbacks", r.fallbacks},
               {"fallback_rate", r.fallback_rate}});
    rows.push_back({to_string(r.model), fixed(r.balanced.value),
                    fixed(r.accuracy), fixed(r.fallback_rate),
                    std::to_string(r.predictions)});
  }
  if (!c.quiet) {
    print_table(err, {"model", "balanced_acc", "accuracy", "fallback", "tests"},
                rows);
  }
  return 0;
}

int cmd_sweep(const RunConfig& c, Sink& sink, std::ostream& err) {
  const EvalOptions options = eval_options(c);
  for (double d : c.densities) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw ArgumentError("densities must lie in (0, 1]");
    }
  }
  const LoadedGraph loaded = load_edge_list(c.input, load_options(c));
  const std::vector<DensityRecord> records =
      sparsity_sweep(loaded.graph, c.densities, options, c.folds, c.seed);
  std::vector<std::vector<std::string>> rows;
  for (const DensityRecord& r : records) {
    sink.emit({{"type", "sweep"},
               {"density", r.density},
               {"model", to_string(r.model)},
               {"edges", r.edges},
               {"balanced_accuracy", r.balanced_accuracy},
               {"accuracy", r.accuracy},
               {"fallback_rate", r.fallback_rate}});
    rows.push_back({fixed(r.density, 2), to_string(r.model),
                    std::to_string(r.edges), fixed(r.balanced_accuracy),
                    fixed(r.accuracy), fixed(r.fallback_rate)});
  }
  if (!c.quiet) {
    print_table(err, {"density", "model", "edges", "balanced_acc", "accuracy",
                      "fallback"},
                rows);
  }
  return 0;
}

int cmd_samples_cdf(const RunConfig& c, Sink& sink, std::ostream& err) {
  const std::vector<ModelKind> kinds = model_kinds(c.cdf_models);
  const LoadedGraph loaded = load_edge_list(c.input, load_options(c));
  const FoldPlan plan = make_folds(loaded.graph, c.folds, c.seed, c.stratified);
  std::vector<std::vector<std::string>> rows;
  for (ModelKind kind : kinds) {
    const SampleCdf cdf =
        param_sample_cdf(loaded.graph, plan, kind, c.thresholds);
    for (std::size_t t = 0; t < cdf.thresholds.size(); ++t) {
      sink.emit({{"type", "cdf"},
                 {"model", to_string(kind)},
                 {"parameters", cdf.parameters},
                 {"threshold", cdf.thresholds[t]},
                 {"fraction_below", cdf.fraction_below[t]}});
      rows.push_back({to_string(kind), "< " + std::to_string(cdf.thresholds[t]),
                      fixed(100.0 * cdf.fraction_below[t], 2) + "%",
                      std::to_string(cdf.parameters)});
    }
  }
  if (!c.quiet) {
    print_table(err, {"model", "samples", "parameters", "of"}, rows);
  }
  return 0;
}

int cmd_update(const RunConfig& c, Sink& sink, std::ostream& err) {
  const LoadOptions options = load_options(c);
  LoadedGraph loaded = load_edge_list(c.input, options);
  Partition partition = obtain_partition(c, loaded.graph, sink);
  const std::vector<ExternalEdge> batch = load_batch(c.batch, options);

  StreamOptions so;
  so.auto_intern = c.auto_intern;
  so.nam = nam_options(c);
  StreamingModel model(std::move(loaded.graph), std::move(partition), so);
  const BatchReport rep = model.apply_edge_batch(std::span(batch));

  const SignedGraph& graph = model.graph();
  json new_nodes = json::array();
  for (const auto& [v, k] : rep.new_nodes) {
    new_nodes.push_back({{"id", graph.external_id(v)}, {"cluster", k}});
  }
  sink.emit({{"type", "batch"},
             {"edges", batch.size()},
             {"inserted", rep.inserted},
             {"relabeled", rep.relabeled},
             {"unchanged", rep.unchanged},
             {"self_loops_dropped", rep.self_loops_dropped},
             {"new_nodes", new_nodes}});
  json state = {{"type", "state"},
                {"nodes", graph.node_count()},
                {"edges", graph.edge_count()},
                {"nam_entries", model.nam().entry_count()},
                {"phi", model.partition().objective()}};
  bool consistent = true;
  if (c.verify) {
    const CooccurrenceCounts nam =
        CooccurrenceCounts::precompute(graph, nam_options(c));
    const Partition rebuilt(graph, model.partition().assignment(),
                            model.partition().k());
    const ClusterCounts cam(graph, rebuilt);
    consistent = nam.same_table(model.nam()) && rebuilt == model.partition() &&
                 cam == model.cluster_counts();
    state["verified"] = consistent;
  }
  sink.emit(state);

  if (!c.graph_out.empty()) save_edge_list(c.graph_out, graph, options);
  if (!c.partition_out.empty()) {
    save_partition(c.partition_out, graph, model.partition());
  }
  if (!c.snapshot_out.empty()) {
    // Snapshots are keyed by dense node ids. New non-numeric ids can change
    // the order a reload assigns, so write the table in that order.
    std::stringstream text;
    write_edge_list(text, graph, options);
    const LoadedGraph reloaded = parse_edge_list(text, options);
    bool same_order = true;
    for (NodeId v = 0; v < graph.node_count() && same_order; ++v) {
      same_order = reloaded.graph.external_id(v) == graph.external_id(v);
    }
    std::ofstream snap(c.snapshot_out, std::ios::binary);
    if (!snap) throw IoError("cannot write '" + c.snapshot_out + "'");
    if (same_order) {
      model.nam().write_snapshot(snap);
    } else {
      CooccurrenceCounts::precompute(reloaded.graph, nam_options(c))
          .write_snapshot(snap);
    }
  }
  if (!c.quiet) {
    err << "inserted " << rep.inserted << ", relabeled " << rep.relabeled
        << ", unchanged " << rep.unchanged << ", new nodes "
        << rep.new_nodes.size() << "; graph now " << graph.node_count()
        << " nodes / " << graph.edge_count() << " edges\n";
  }
  if (!consistent) {
    err << "error: incremental structures differ from a rebuild\n";
    return 1;
  }
  return 0;
}

void write_header(std::ostream& os, const json& config) {
  os << "# " << config.dump() << '\n';
}

int cmd_convert(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadOptions options = load_options(c);
  const LoadedGraph loaded = load_edge_list(c.input, options);
  const json config = echo(c);
  if (c.output.empty()) {
    write_header(out, config);
    write_edge_list(out, loaded.graph, options);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw IoError("cannot write '" + c.output + "'");
    write_header(f, config);
    write_edge_list(f, loaded.graph, options);
  }
  if (!c.snapshot_out.empty()) {
    const CooccurrenceCounts nam =
        CooccurrenceCounts::precompute(loaded.graph, nam_options(c));
    std::ofstream snap(c.snapshot_out, std::ios::binary);
    if (!snap) throw IoError("cannot write '" + c.snapshot_out + "'");
    nam.write_snapshot(snap);
  }
  if (!c.quiet) {
    err << "wrote " << loaded.graph.node_count() << " nodes / "
        << loaded.graph.edge_count() << " edges\n";
  }
  return 0;
}

int cmd_generate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  PlantedOptions po;
  po.n_nodes = c.nodes;
  po.n_roles = c.roles;
  po.edge_prob = c.edge_prob;
  po.noise = c.noise;
  po.seed = c.seed;
  const LoadOptions options = load_options(c);
  po.n_labels = options.alphabet.size();
  PlantedGraph planted = generate_planted(po);
  const json config = echo(c);
  if (c.output.empty()) {
    write_header(out, config);
    write_edge_list(out, planted.graph, options);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw IoError("cannot write '" + c.output + "'");
    write_header(f, config);
    write_edge_list(f, planted.graph, options);
  }
  if (!c.partition_out.empty()) {
    const Partition truth(planted.graph, planted.roles, planted.n_roles);
    save_partition(c.partition_out, planted.graph, truth);
  }
  if (!c.quiet) {
    err << "generated " << planted.graph.node_count() << " nodes / "
        << planted.graph.edge_count() << " edges over " << planted.n_roles
        << " roles\n";
  }
  return 0;
}

// Records go to --output when given, else to `out`.
int with_sink(const RunConfig& c, std::ostream& out,
              int (*fn)(const RunConfig&, Sink&, std::ostream&),
              std::ostream& err) {
  // Build the echo first: it digests the inputs and fails early on a
  // missing file.
  const json config = echo(c);
  if (c.output.empty()) {
    Sink sink(out);
    sink.emit(config);
    return fn(c, sink, err);
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw IoError("cannot write '" + c.output + "'");
  Sink sink(f);
  sink.emit(config);
  const int status = fn(c, sink, err);
  f.flush();
  if (!f) throw IoError("failed writing '" + c.output + "'");
  return status;
}

void add_common(CLI::App* sub, RunConfig& c, bool output = true) {
  sub->add_option("-i,--input", c.input, "Edge list, one 'src dst sign' per line")
      ->required();
  if (output) {
    sub->add_option("-o,--output", c.output,
                    "Write the artifact here instead of standard output");
  }
  sub->add_option("--labels", c.labels,
                  "Comma-separated label alphabet; empty means signs (1/+1/+ and -1/-)");
  sub->add_option("--seed", c.seed, "Seed for every random choice");
  sub->add_flag("-q,--quiet", c.quiet, "Suppress the table on standard error");
  sub->add_option("--config", c.config_file,
                  "File of key=value lines supplying defaults; flags override");
}

void add_model(CLI::App* sub, RunConfig& c) {
  sub->add_option("-m,--model", c.models, "Models, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember(kModelNames));
  sub->add_option("--mu", c.mu, "Dirichlet smoothing parameter")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--lambda-mode", c.lambda_mode,
                  "Count behind the smoothing weight: support or paper")
      ->check(CLI::IsMember({"support", "paper"}));
  sub->add_option("--lcgm-alpha", c.lcgm_floor_alpha,
                  "Laplace floor for the raw context-generator models")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--prior", c.prior_mode,
                  "Context-generator prior: uniform or empirical")
      ->check(CLI::IsMember({"uniform", "empirical"}));
}

void add_clustering(CLI::App* sub, RunConfig& c) {
  sub->add_option("-k,--clusters", c.clusters, "Number of clusters")
      ->check(CLI::PositiveNumber);
  sub->add_option("--scan", c.scan, "Gibbs scan order: deterministic or random")
      ->check(CLI::IsMember({"deterministic", "random"}));
  sub->add_option("--temperature", c.temperature,
                  "Sampling temperature when not greedy")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--greedy,!--no-greedy", c.greedy,
                "Move only on strict objective improvement (default on)");
  sub->add_option("--max-sweeps", c.max_sweeps, "Sweep limit per restart")
      ->check(CLI::PositiveNumber);
  sub->add_option("--restarts", c.restarts, "Independent random restarts")
      ->check(CLI::PositiveNumber);
  sub->add_option("--early-stop-tol", c.early_stop_tol,
                  "Stop when a sweep changes phi by less than this fraction")
      ->check(CLI::NonNegativeNumber);
}

void add_nam(CLI::App* sub, RunConfig& c) {
  sub->add_option("--nam", c.nam,
                  "Co-occurrence counts: on-demand or precomputed")
      ->check(CLI::IsMember({"on-demand", "precomputed"}));
  sub->add_option("--nam-budget", c.nam_budget,
                  "Largest out-edge pair count a precomputed table may enumerate");
  sub->add_flag("--nam-override", c.nam_override,
                "Precompute even when over budget");
}

void add_folds(CLI::App* sub, RunConfig& c) {
  sub->add_option("--folds", c.folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1 << 20));
  sub->add_flag("--stratified", c.stratified, "Deal folds label by label");
}

void add_eval(CLI::App* sub, RunConfig& c) {
  add_model(sub, c);
  add_clustering(sub, c);
  add_folds(sub, c);
  add_nam(sub, c);
  sub->add_flag("--reuse-clustering", c.reuse_clustering,
                "Cluster the full graph once instead of every training fold "
                "(lets test edges shape the partition)");
  sub->add_option("--threads", c.threads, "Worker threads for prediction")
      ->check(CLI::PositiveNumber);
}

// Options left unset on the command line take their value from the file.
// Keys are long option names, optionally under a [subcommand] section.
void apply_config_file(CLI::App* sub, const std::string& path) {
  const std::vector<CLI::ConfigItem> items = CLI::ConfigINI().from_file(path);
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() &&
        (item.parents.size() > 1 || item.parents[0] != sub->get_name())) {
      continue;
    }
    CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") {
      throw CLI::ConversionError("unknown key '" + item.name + "'");
    }
    if (opt->count() > 0) continue;
    for (const std::string& value : item.inputs) opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Link-label (sign) prediction for signed directed networks",
               "linklabel"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  auto* stats = app.add_subcommand("stats", "Node, edge and label counts");
  add_common(stats, c);

  auto* clus = app.add_subcommand("cluster", "Partition nodes by Gibbs sampling");
  add_common(clus, c);
  add_clustering(clus, c);
  clus->add_option("--partition-out", c.partition_out,
                   "Save the partition as 'node cluster' lines");

  auto* pred = app.add_subcommand("predict", "Predict labels of queried edges");
  add_common(pred, c);
  add_model(pred, c);
  add_clustering(pred, c);
  add_nam(pred, c);
  pred->add_option("--queries", c.queries, "File of 'src dst' pairs")->required();
  pred->add_option("--partition", c.partition_in,
                   "Use this partition instead of clustering");
  pred->add_flag("-v,--verbose", c.verbose,
                 "Include per-entry support and smoothing weights");

  auto* eval = app.add_subcommand("evaluate", "k-fold cross-validation");
  add_common(eval, c);
  add_eval(eval, c);

  auto* sweep = app.add_subcommand("sweep", "Evaluate at several edge densities");
  add_common(sweep, c);
  add_eval(sweep, c);
  sweep->add_option("--densities", c.densities, "Edge densities in (0, 1]")
      ->delimiter(',');

  auto* cdf = app.add_subcommand(
      "samples-cdf", "Share of local parameters backed by few samples");
  add_common(cdf, c);
  add_folds(cdf, c);
  cdf->add_option("-m,--model", c.cdf_models, "ltlgm and/or lcgm")
      ->delimiter(',')
      ->check(CLI::IsMember({"ltlgm", "lcgm"}));
  cdf->add_option("--thresholds", c.thresholds, "Sample-count thresholds")
      ->delimiter(',');

  auto* upd = app.add_subcommand(
      "update", "Apply an edge batch to precomputed counts and a partition");
  add_common(upd, c);
  add_clustering(upd, c);
  add_nam(upd, c);
  upd->add_option("--batch", c.batch, "Edge list of new or relabeled edges")
      ->required();
  upd->add_option("--partition", c.partition_in,
                  "Start from this partition instead of clustering");
  upd->add_flag("--auto-intern,!--no-auto-intern", c.auto_intern,
                "Create nodes for unknown ids in the batch (default on)");
  upd->add_flag("--verify", c.verify,
                "Compare every structure with a rebuild from scratch");
  upd->add_option("--graph-out", c.graph_out, "Save the updated edge list");
  upd->add_option("--partition-out", c.partition_out,
                  "Save the updated partition");
  upd->add_option("--snapshot-out", c.snapshot_out,
                  "Save the co-occurrence table snapshot");

  auto* conv = app.add_subcommand(
      "convert", "Rewrite an edge list in normalized form");
  add_common(conv, c);
  add_nam(conv, c);
  conv->add_option("--snapshot-out", c.snapshot_out,
                   "Also save a precomputed co-occurrence snapshot");

  auto* gen = app.add_subcommand("generate", "Write a synthetic planted-role graph");
  gen->add_option("-o,--output", c.output, "Edge list destination");
  gen->add_option("--nodes", c.nodes, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--roles", c.roles, "Planted role count")
      ->check(CLI::Range(2, 1 << 20));
  gen->add_option("--edge-prob", c.edge_prob, "Probability of each ordered pair")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--noise", c.noise, "Probability of a label flip")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--labels", c.labels, "Comma-separated label alphabet");
  gen->add_option("--seed", c.seed, "Generator seed");
  gen->add_option("--partition-out", c.partition_out, "Save the planted roles");
  gen->add_flag("-q,--quiet", c.quiet, "Suppress the summary line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  if (!c.config_file.empty()) {
    try {
      apply_config_file(sub, c.config_file);
    } catch (const CLI::FileError& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    } catch (const CLI::Error& e) {
      err << "error: " << c.config_file << ": " << e.what() << '\n';
      return 2;
    }
  }
  try {
    if (c.command == "stats") return with_sink(c, out, cmd_stats, err);
    if (c.command == "cluster") return with_sink(c, out, cmd_cluster, err);
    if (c.command == "predict") return with_sink(c, out, cmd_predict, err);
    if (c.command == "evaluate") return with_sink(c, out, cmd_evaluate, err);
    if (c.command == "sweep") return with_sink(c, out, cmd_sweep, err);
    if (c.command == "samples-cdf") return with_sink(c, out, cmd_samples_cdf, err);
    if (c.command == "update") return with_sink(c, out, cmd_update, err);
    if (c.command == "convert") return cmd_convert(c, out, err);
    if (c.command == "generate") return cmd_generate(c, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: unknown command '" << c.command << "'\n";
  return 2;
}

}  // namespace linklabel::cli
