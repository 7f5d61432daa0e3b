#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pucs/environment.hpp"
#include "pucs/probing.hpp"

namespace pucs {

// Anytime confidence radius for an empirical mean of n samples:
//   sqrt((1+n) * ln(sqrt(n+1)/delta) / (2 n^2)),  +infinity when n = 0.
// Throws std::invalid_argument unless delta is in (0,1).
double confidence_radius(long long n, double delta);

// Running estimates of resource PMFs and reward distributions learned from
// probing and served-play feedback.
struct Estimators {
  int M = 0;
  int K = 0;
  int D_max = 0;
  double delta = 0.05;
  std::vector<std::vector<long long>> resource_counts;  // M x D_max
  std::vector<long long> arm_obs;                       // per-arm totals
  std::vector<std::vector<long long>> n;                // M x K reward counts
  std::vector<std::vector<double>> reward_sum;          // M x K
  // Observed-value histograms backing the empirical reward distributions.
  std::vector<std::vector<std::map<double, long long>>> value_counts;

  Estimators() = default;
  Estimators(int M, int K, int D_max, double delta);

  double mu_hat(int m, int k) const;
  double radius(int m, int k) const;
  // mu_hat + radius; unexplored pairs return the finite optimism sentinel.
  double ucb(int m, int k, double sentinel, bool clamp) const;
  // Empirical PMF; uniform over {1..D_max} until the arm is first observed.
  ResourcePmf pmf_hat(int m) const;
  // Empirical reward distribution; optimistic point mass at 1.0 until the
  // pair is first observed.
  DiscreteDistribution reward_hat(int m, int k) const;
  // Environment view of the estimates (true probing cost attached), suitable
  // for greedy_probe.
  Environment belief(const ProbingCost& cost) const;
};

// One arm's feedback in a round: its resource count plus any per-play reward
// observations (absent entries were not served).
struct Observation {
  int arm = 0;
  int resources = 0;
  std::vector<std::optional<double>> rewards;
};

void update_estimates(Estimators& est, const std::vector<Observation>& obs);

struct RoundLog {
  int t = 0;
  std::vector<int> probe_set;
  ActionProfile profile;
  double realized_reward = 0.0;
  // Expected per-round value of this round's decision rule under the true
  // environment; the quantity the regret harness consumes.
  double score = 0.0;
  int obs_resources = 0;
  int obs_rewards = 0;
};

enum class Policy { Olpa, NonProbing, GreedyRandom, RandomRandom };

const char* policy_id(Policy p);  // "olpa", "nonprobing", "gr", "rr"
std::optional<Policy> policy_from_id(const std::string& id);

struct OnlineConfig {
  int T = 1000;
  double delta = 0.05;
  // Per-round probing search; Monte Carlo draws reseed deterministically from
  // the run stream each round.
  ExpectationMethod probe_method = ExpectationMethod::monte_carlo(200, 0);
  // Round-score evaluation under the true environment. When Monte Carlo, all
  // algorithms share the same dedicated evaluation stream (score_seed).
  ExpectationMethod score_method = ExpectationMethod::exact();
  std::uint64_t score_seed = 9001;
  bool clamp_ucb = false;       // clamp mu_hat + radius to 1 (off by default)
  double sentinel_scale = 10.0;  // optimism sentinel = scale * K
  // Random-assignment rules are scored by enumerating the (M+1)^K profiles
  // up to this many; larger spaces fall back to seeded sampling.
  long long score_profile_cap = 4096;
};

std::vector<RoundLog> run_policy(Policy policy, const Environment& env,
                                 const OnlineConfig& cfg, std::uint64_t seed);

inline std::vector<RoundLog> olpa_run(const Environment& env,
                                      const OnlineConfig& cfg,
                                      std::uint64_t seed) {
  return run_policy(Policy::Olpa, env, cfg, seed);
}

inline std::vector<RoundLog> run_baseline(Policy policy,
                                          const Environment& env,
                                          const OnlineConfig& cfg,
                                          std::uint64_t seed) {
  return run_policy(policy, env, cfg, seed);
}

}  // namespace pucs
