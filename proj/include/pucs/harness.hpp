#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pucs/environment.hpp"
#include "pucs/olpa.hpp"
#include "pucs/probing.hpp"

namespace pucs {

// Approximation factor (e-1)/(2e-1) of the offline greedy guarantee; the
// regret metric is defined against this constant and it is deliberately not
// configurable.
inline const double kZeta =
    (std::exp(1.0) - 1.0) / (2.0 * std::exp(1.0) - 1.0);

struct RegretTrace {
  std::string algo;
  std::uint64_t seed = 0;
  std::vector<double> round_scores;  // R(S_t)
  double optimal = 0.0;              // R(S*)
  std::vector<double> round_regret;  // zeta * R(S*) - R(S_t)
  std::vector<double> cum_regret;    // running sum of round_regret
  std::string fingerprint;
};

// Builds the per-round and cumulative zeta-regret series. Negative values are
// legitimate (zeta < 1). Throws std::invalid_argument when optimal < 0.
RegretTrace zeta_regret(const std::string& algo, std::uint64_t seed,
                        const std::vector<double>& round_scores,
                        double optimal, const std::string& fingerprint = "");

struct ExperimentConfig {
  Environment env;
  std::vector<Policy> algos;
  std::vector<std::uint64_t> seeds;
  OnlineConfig online;                           // carries T
  ExpectationMethod oracle_method = ExpectationMethod::exact();
  std::vector<int> checkpoints = {1000, 2000, 3000};
  int jobs = 0;  // 0 = hardware concurrency
  std::string fingerprint;
};

struct ExperimentResult {
  std::vector<RegretTrace> traces;  // algo-major, then seed, config order
  std::vector<int> probe_star;      // exhaustive-optimal probing set
  double optimal = 0.0;             // R(S*)
  std::string csv;      // t,algo,seed,round_score,optimal_score,round_regret,cum_regret
  std::string summary;  // algo x checkpoint mean cumulative regret, 2 dp
};

// Runs every (algorithm, seed) cell for T rounds, scores each round's
// decision rule under the true environment, and assembles the CSV (rows
// ordered by config algo order, then seed order, then t) plus the checkpoint
// summary. Cells run in parallel; output is a deterministic ordered merge.
// Throws std::runtime_error when the exhaustive oracle is infeasible for the
// configured environment under Exact expectation (the message points at
// Monte Carlo scoring).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace pucs
