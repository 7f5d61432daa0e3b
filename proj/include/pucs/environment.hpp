#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pucs/distributions.hpp"
#include "pucs/rng.hpp"

namespace pucs {

// A problem instance: M arms, K plays, resource and reward distributions,
// and the probing cost schedule.
struct Environment {
  int M = 0;
  int K = 0;
  int D_max = 0;
  std::vector<ResourcePmf> resource_pmfs;                       // size M
  std::vector<std::vector<DiscreteDistribution>> reward_dists;  // M x K
  ProbingCost probing_cost;

  int budget() const { return probing_cost.budget(); }
  double mean_reward(int m, int k) const { return reward_dists[m][k].mean(); }
  std::vector<double> mean_rewards(int m) const;
  // Throws std::invalid_argument if any component is malformed or sizes
  // disagree; loaders and builders validate eagerly.
  void validate() const;
};

// One round's realized resource counts and rewards for every arm/play.
struct RoundRealization {
  std::vector<int> resources;                // N_m
  std::vector<std::vector<double>> rewards;  // X_{m,k}
};

// Disjoint assignment of plays to arms; plays[m] holds ascending play ids.
struct ActionProfile {
  std::vector<std::vector<int>> plays;

  void validate(int M, int K) const;
  int total_plays() const;
};

RoundRealization sample_round(const Environment& env, Rng& rng);

// Reward collected from a probed arm: the top min(N, |C|) realized values
// among the assigned plays (ties broken toward the lower play index).
double probed_arm_reward(const std::vector<int>& plays,
                         const std::vector<double>& rewards, int n_resources);

// Expected reward of an unprobed arm under the priority-serving rule:
// sum over slots i of the i-th largest mean times P(N >= i).
double expected_arm_reward(const std::vector<int>& plays,
                           const std::vector<double>& means,
                           const ResourcePmf& pmf);

// Total round objective: (1 - alpha(|S|)) * (probed realized + unprobed
// expected). Throws std::invalid_argument when |S| exceeds the budget.
double total_reward(const Environment& env, const std::vector<int>& probe_set,
                    const ActionProfile& profile,
                    const RoundRealization& realization);

nlohmann::json environment_to_json(const Environment& env);
Environment environment_from_json(const nlohmann::json& j);
void save_environment(const Environment& env, const std::string& path);
Environment load_environment(const std::string& path);

}  // namespace pucs
