#include "pucs/environment.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <stdexcept>

namespace pucs {

std::vector<double> Environment::mean_rewards(int m) const {
  std::vector<double> mu(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    mu[static_cast<std::size_t>(k)] = mean_reward(m, k);
  return mu;
}

void Environment::validate() const {
  if (M < 1 || K < 1 || D_max < 1)
    throw std::invalid_argument("environment: M, K, D_max must be positive");
  if (static_cast<int>(resource_pmfs.size()) != M ||
      static_cast<int>(reward_dists.size()) != M)
    throw std::invalid_argument("environment: per-arm tables must have M rows");
  for (const auto& pmf : resource_pmfs) {
    pmf.validate();
    if (pmf.d_max() != D_max)
      throw std::invalid_argument("environment: resource pmf length != D_max");
  }
  for (const auto& row : reward_dists) {
    if (static_cast<int>(row.size()) != K)
      throw std::invalid_argument("environment: reward row length != K");
    for (const auto& d : row) d.validate();
  }
  probing_cost.validate();
}

void ActionProfile::validate(int M, int K) const {
  if (static_cast<int>(plays.size()) != M)
    throw std::invalid_argument("profile: need one play set per arm");
  std::vector<bool> seen(static_cast<std::size_t>(K), false);
  for (const auto& set : plays)
    for (int k : set) {
      if (k < 0 || k >= K)
        throw std::invalid_argument("profile: play index out of range");
      if (seen[static_cast<std::size_t>(k)])
        throw std::invalid_argument("profile: play assigned twice");
      seen[static_cast<std::size_t>(k)] = true;
    }
}

int ActionProfile::total_plays() const {
  int n = 0;
  for (const auto& set : plays) n += static_cast<int>(set.size());
  return n;
}

RoundRealization sample_round(const Environment& env, Rng& rng) {
  RoundRealization real;
  real.resources.resize(static_cast<std::size_t>(env.M));
  real.rewards.assign(static_cast<std::size_t>(env.M),
                      std::vector<double>(static_cast<std::size_t>(env.K)));
  for (int m = 0; m < env.M; ++m) {
    real.resources[static_cast<std::size_t>(m)] =
        env.resource_pmfs[static_cast<std::size_t>(m)].sample(rng);
    for (int k = 0; k < env.K; ++k)
      real.rewards[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] =
          env.reward_dists[static_cast<std::size_t>(m)]
                          [static_cast<std::size_t>(k)]
                              .sample(rng);
  }
  return real;
}

double probed_arm_reward(const std::vector<int>& plays,
                         const std::vector<double>& rewards, int n_resources) {
  std::vector<double> vals;
  vals.reserve(plays.size());
  for (int k : plays) vals.push_back(rewards[static_cast<std::size_t>(k)]);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  int take = std::min<int>(n_resources, static_cast<int>(vals.size()));
  double total = 0.0;
  for (int i = 0; i < take; ++i) total += vals[static_cast<std::size_t>(i)];
  return total;
}

double expected_arm_reward(const std::vector<int>& plays,
                           const std::vector<double>& means,
                           const ResourcePmf& pmf) {
  std::vector<double> mu;
  mu.reserve(plays.size());
  for (int k : plays) mu.push_back(means[static_cast<std::size_t>(k)]);
  std::sort(mu.begin(), mu.end(), std::greater<>());
  double total = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    total += mu[i] * pmf.survival(static_cast<int>(i) + 1);
  return total;
}

double total_reward(const Environment& env, const std::vector<int>& probe_set,
                    const ActionProfile& profile,
                    const RoundRealization& realization) {
  int size = static_cast<int>(probe_set.size());
  if (size > env.budget())
    throw std::invalid_argument("total reward: probing set exceeds budget");
  double alpha = env.probing_cost.at(size);
  if (alpha >= 1.0) return 0.0;

  std::vector<bool> probed(static_cast<std::size_t>(env.M), false);
  for (int m : probe_set) probed[static_cast<std::size_t>(m)] = true;

  double sum = 0.0;
  for (int m = 0; m < env.M; ++m) {
    const auto& plays = profile.plays[static_cast<std::size_t>(m)];
    if (probed[static_cast<std::size_t>(m)]) {
      sum += probed_arm_reward(plays,
                               realization.rewards[static_cast<std::size_t>(m)],
                               realization.resources[static_cast<std::size_t>(m)]);
    } else {
      sum += expected_arm_reward(plays, env.mean_rewards(m),
                                 env.resource_pmfs[static_cast<std::size_t>(m)]);
    }
  }
  return (1.0 - alpha) * sum;
}

nlohmann::json environment_to_json(const Environment& env) {
  nlohmann::json j;
  j["M"] = env.M;
  j["K"] = env.K;
  j["D_max"] = env.D_max;
  auto& pmfs = j["resource_pmfs"] = nlohmann::json::array();
  for (const auto& pmf : env.resource_pmfs) pmfs.push_back(pmf.probs);
  auto& supports = j["reward_supports"] = nlohmann::json::array();
  auto& probs = j["reward_probs"] = nlohmann::json::array();
  for (const auto& row : env.reward_dists) {
    nlohmann::json srow = nlohmann::json::array();
    nlohmann::json prow = nlohmann::json::array();
    for (const auto& d : row) {
      srow.push_back(d.support);
      prow.push_back(d.probs);
    }
    supports.push_back(std::move(srow));
    probs.push_back(std::move(prow));
  }
  j["alpha"] = env.probing_cost.alpha;
  return j;
}

Environment environment_from_json(const nlohmann::json& j) {
  Environment env;
  env.M = j.at("M").get<int>();
  env.K = j.at("K").get<int>();
  env.D_max = j.at("D_max").get<int>();
  for (const auto& probs : j.at("resource_pmfs")) {
    ResourcePmf pmf;
    pmf.probs = probs.get<std::vector<double>>();
    env.resource_pmfs.push_back(std::move(pmf));
  }
  const auto& supports = j.at("reward_supports");
  const auto& probs = j.at("reward_probs");
  if (supports.size() != probs.size())
    throw std::invalid_argument("environment json: reward tables disagree");
  for (std::size_t m = 0; m < supports.size(); ++m) {
    std::vector<DiscreteDistribution> row;
    if (supports[m].size() != probs[m].size())
      throw std::invalid_argument("environment json: reward tables disagree");
    for (std::size_t k = 0; k < supports[m].size(); ++k) {
      DiscreteDistribution d;
      d.support = supports[m][k].get<std::vector<double>>();
      d.probs = probs[m][k].get<std::vector<double>>();
      row.push_back(std::move(d));
    }
    env.reward_dists.push_back(std::move(row));
  }
  env.probing_cost.alpha = j.at("alpha").get<std::vector<double>>();
  env.validate();
  return env;
}

void save_environment(const Environment& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << environment_to_json(env).dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

Environment load_environment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return environment_from_json(j);
}

}  // namespace pucs
