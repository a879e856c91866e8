#pragma once

#include <string>
#include <vector>

#include "mcm/biased.hpp"
#include "mcm/shadow.hpp"

namespace mcm {

struct ExperimentConfig {
  std::string experiment;
  size_t n_min = 3;
  size_t n_max = 8;
  size_t shots = 10000;
  uint64_t seed = 42;
  std::vector<std::string> protocols;
  std::vector<double> theta_grid;  // radians
  std::vector<double> a_grid;
  std::vector<size_t> k_grid;
  size_t num_states = 100;
};

/// Parse and validate the JSON config text (schema documented in the
/// README). Unknown experiment names and out-of-cap n ranges are rejected.
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ResultRow {
  std::string experiment;
  std::string protocol;
  size_t n = 0;
  std::string params;  // "key=value;..." within one experiment
  double mean = 0;
  double variance = 0;
  size_t shots = 0;
  uint64_t seed = 0;
  double elapsed_ms = 0;
};

/// Run all grid points of the experiment. Deterministic for a fixed
/// (config, seed) and independent of the worker-thread count; threads come
/// from the MCM_THREADS environment variable (default: hardware).
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

/// RFC-4180 CSV with a header row, floats at 17 significant digits, rows
/// sorted by (experiment, protocol, n, params).
std::string rows_to_csv(std::vector<ResultRow> rows);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
};

/// Ordinary least squares of y against x; needs >= 3 points.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Exact-identity oracle suites (channel identity, Pauli partition,
/// synthesis replay, MUB overlaps, exact moments, overlap profiles,
/// zero-variance stabilizer estimation). Prints one line per suite to out;
/// returns true iff everything passed.
bool run_oracles(size_t max_n, std::string& report);

size_t worker_thread_count();

}  // namespace mcm
