#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace linklabel::cli {

// Every tunable of every subcommand, after defaults, config file and flags
// have been merged. Echoed as the first record of each artifact.
struct RunConfig {
  std::string command;

  std::string input;
  std::string config_file;
  std::string output;
  std::string queries;
  std::string batch;
  std::string partition_in;
  std::string partition_out;
  std::string graph_out;
  std::string snapshot_out;
  std::string labels;  // comma separated label names; empty means +/-

  std::vector<std::string> models = {"stlgm"};
  std::vector<std::string> cdf_models = {"ltlgm", "lcgm"};
  double mu = 4.0;
  std::string lambda_mode = "support";
  double lcgm_floor_alpha = 1.0;
  std::string prior_mode = "uniform";

  std::size_t clusters = 30;
  std::string scan = "deterministic";
  double temperature = 1.0;
  bool greedy = true;
  std::size_t max_sweeps = 20;
  std::size_t restarts = 3;
  double early_stop_tol = 1e-6;
  bool reuse_clustering = false;

  std::size_t folds = 10;
  bool stratified = false;
  std::vector<double> densities = {0.1, 0.3, 0.5, 0.7, 1.0};
  std::vector<std::uint64_t> thresholds = {1, 2, 4, 8, 16, 32, 64};

  std::string nam = "on-demand";
  std::uint64_t nam_budget = 200'000'000;
  bool nam_override = false;
  bool auto_intern = true;
  bool verify = false;

  std::size_t nodes = 300;
  std::size_t roles = 5;
  double edge_prob = 0.05;
  double noise = 0.1;

  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool verbose = false;
  bool quiet = false;
};

// Parses argv and runs one subcommand. Machine-readable records go to
// --output or `out`; the human-readable table and diagnostics go to `err`.
// Returns 0 on success, 1 on a domain error, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linklabel::cli
