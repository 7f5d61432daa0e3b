#include "pucs/olpa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "pucs/assignment.hpp"
#include "pucs/log.hpp"

namespace pucs {

double confidence_radius(long long n, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("confidence radius: delta must be in (0,1)");
  if (n <= 0) return std::numeric_limits<double>::infinity();
  double dn = static_cast<double>(n);
  return std::sqrt((1.0 + dn) * std::log(std::sqrt(dn + 1.0) / delta) /
                   (2.0 * dn * dn));
}

Estimators::Estimators(int M_, int K_, int D_max_, double delta_)
    : M(M_), K(K_), D_max(D_max_), delta(delta_) {
  resource_counts.assign(static_cast<std::size_t>(M),
                         std::vector<long long>(static_cast<std::size_t>(D_max),
                                                0));
  arm_obs.assign(static_cast<std::size_t>(M), 0);
  n.assign(static_cast<std::size_t>(M),
           std::vector<long long>(static_cast<std::size_t>(K), 0));
  reward_sum.assign(static_cast<std::size_t>(M),
                    std::vector<double>(static_cast<std::size_t>(K), 0.0));
  value_counts.assign(
      static_cast<std::size_t>(M),
      std::vector<std::map<double, long long>>(static_cast<std::size_t>(K)));
}

double Estimators::mu_hat(int m, int k) const {
  long long c = n[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  if (c == 0) return 0.0;
  return reward_sum[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] /
         static_cast<double>(c);
}

double Estimators::radius(int m, int k) const {
  return confidence_radius(
      n[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)], delta);
}

double Estimators::ucb(int m, int k, double sentinel, bool clamp) const {
  if (n[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] == 0)
    return sentinel;
  double v = mu_hat(m, k) + radius(m, k);
  return clamp ? std::min(v, 1.0) : v;
}

ResourcePmf Estimators::pmf_hat(int m) const {
  long long total = arm_obs[static_cast<std::size_t>(m)];
  if (total == 0) return ResourcePmf::uniform(D_max);
  ResourcePmf pmf;
  pmf.probs.reserve(static_cast<std::size_t>(D_max));
  for (long long c : resource_counts[static_cast<std::size_t>(m)])
    pmf.probs.push_back(static_cast<double>(c) / static_cast<double>(total));
  return pmf;
}

DiscreteDistribution Estimators::reward_hat(int m, int k) const {
  long long c = n[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  if (c == 0) return DiscreteDistribution::point_mass(1.0);
  DiscreteDistribution dist;
  const auto& hist =
      value_counts[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  dist.support.reserve(hist.size());
  dist.probs.reserve(hist.size());
  for (const auto& [value, count] : hist) {
    dist.support.push_back(value);
    dist.probs.push_back(static_cast<double>(count) / static_cast<double>(c));
  }
  return dist;
}

Environment Estimators::belief(const ProbingCost& cost) const {
  Environment env;
  env.M = M;
  env.K = K;
  env.D_max = D_max;
  env.resource_pmfs.reserve(static_cast<std::size_t>(M));
  env.reward_dists.reserve(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    env.resource_pmfs.push_back(pmf_hat(m));
    std::vector<DiscreteDistribution> row;
    row.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) row.push_back(reward_hat(m, k));
    env.reward_dists.push_back(std::move(row));
  }
  env.probing_cost = cost;
  return env;
}

void update_estimates(Estimators& est, const std::vector<Observation>& obs) {
  for (const Observation& o : obs) {
    if (o.arm < 0 || o.arm >= est.M)
      throw std::invalid_argument("observation: arm id out of range");
    if (o.resources < 1 || o.resources > est.D_max)
      throw std::invalid_argument("observation: resource count out of range");
    if (static_cast<int>(o.rewards.size()) > est.K)
      throw std::invalid_argument("observation: too many reward entries");
    std::size_t m = static_cast<std::size_t>(o.arm);
    ++est.resource_counts[m][static_cast<std::size_t>(o.resources - 1)];
    ++est.arm_obs[m];
    for (std::size_t k = 0; k < o.rewards.size(); ++k) {
      if (!o.rewards[k].has_value()) continue;
      double v = *o.rewards[k];
      ++est.n[m][k];
      est.reward_sum[m][k] += v;
      ++est.value_counts[m][k][v];
    }
  }
}

const char* policy_id(Policy p) {
  switch (p) {
    case Policy::Olpa: return "olpa";
    case Policy::NonProbing: return "nonprobing";
    case Policy::GreedyRandom: return "gr";
    case Policy::RandomRandom: return "rr";
  }
  return "olpa";
}

std::optional<Policy> policy_from_id(const std::string& id) {
  if (id == "olpa") return Policy::Olpa;
  if (id == "nonprobing") return Policy::NonProbing;
  if (id == "gr") return Policy::GreedyRandom;
  if (id == "rr") return Policy::RandomRandom;
  return std::nullopt;
}

namespace {

bool assigns_by_estimates(Policy p) {
  return p == Policy::Olpa || p == Policy::NonProbing;
}

// Joint support of the probed arms' resources and rewards under the true
// environment; unprobed entries stay at their dummy values.
std::vector<std::pair<double, RoundRealization>> probe_outcomes(
    const Environment& env, const std::vector<int>& S) {
  std::vector<std::pair<double, RoundRealization>> out;
  RoundRealization real;
  real.resources.assign(static_cast<std::size_t>(env.M), 1);
  real.rewards.assign(static_cast<std::size_t>(env.M),
                      std::vector<double>(static_cast<std::size_t>(env.K), 0.0));
  std::function<void(std::size_t, int, double)> rec =
      [&](std::size_t si, int k, double prob) {
        if (si == S.size()) {
          out.emplace_back(prob, real);
          return;
        }
        int m = S[si];
        if (k == -1) {
          const auto& probs =
              env.resource_pmfs[static_cast<std::size_t>(m)].probs;
          for (std::size_t di = 0; di < probs.size(); ++di) {
            if (probs[di] <= 0.0) continue;
            real.resources[static_cast<std::size_t>(m)] =
                static_cast<int>(di) + 1;
            rec(si, 0, prob * probs[di]);
          }
          return;
        }
        if (k == env.K) {
          rec(si + 1, -1, prob);
          return;
        }
        const auto& dist = env.reward_dists[static_cast<std::size_t>(m)]
                                           [static_cast<std::size_t>(k)];
        for (std::size_t vi = 0; vi < dist.support.size(); ++vi) {
          if (dist.probs[vi] <= 0.0) continue;
          real.rewards[static_cast<std::size_t>(m)]
                      [static_cast<std::size_t>(k)] = dist.support[vi];
          rec(si, k + 1, prob * dist.probs[vi]);
        }
      };
  rec(0, -1, 1.0);
  return out;
}

// Value of a fixed profile under the true environment: realized rewards for
// probed arms, priority-serving expectations for the rest.
double profile_value_under_truth(
    const Environment& env, const std::vector<bool>& probed,
    const ActionProfile& profile, const RoundRealization& real,
    const std::vector<std::vector<double>>& true_means) {
  double value = 0.0;
  for (int m = 0; m < env.M; ++m) {
    std::size_t mi = static_cast<std::size_t>(m);
    const auto& plays = profile.plays[mi];
    if (plays.empty()) continue;
    if (probed[mi])
      value += probed_arm_reward(plays, real.rewards[mi], real.resources[mi]);
    else
      value += expected_arm_reward(plays, true_means[mi],
                                   env.resource_pmfs[mi]);
  }
  return value;
}

// Expected per-round value of the decision rule the policy just applied,
// integrated over the probed arms' joint outcome distribution under the true
// environment. Estimate-driven policies re-run the assignment per outcome;
// random-assignment policies average over their profile distribution.
double round_score(Policy policy, const Environment& env,
                   const OnlineConfig& cfg, const Estimators& est,
                   const std::vector<int>& S, int t,
                   const std::vector<std::vector<double>>& true_means) {
  double alpha = env.probing_cost.at(static_cast<int>(S.size()));
  if (alpha >= 1.0) return 0.0;

  std::vector<bool> probed(static_cast<std::size_t>(env.M), false);
  for (int m : S) probed[static_cast<std::size_t>(m)] = true;

  std::vector<std::pair<double, RoundRealization>> outcomes;
  if (S.empty() || cfg.score_method.kind == ExpectationMethod::Kind::Exact) {
    if (!S.empty()) {
      long long count = exact_outcome_count(env, S);
      if (count > cfg.score_method.exact_limit)
        throw std::runtime_error(
            "exact round scoring needs " + std::to_string(count) +
            " outcomes, above the limit of " +
            std::to_string(cfg.score_method.exact_limit) +
            "; use Monte Carlo scoring instead");
    }
    outcomes = probe_outcomes(env, S);
  } else {
    Rng eval = Rng(cfg.score_seed).fork(static_cast<std::uint64_t>(t));
    double w = 1.0 / static_cast<double>(cfg.score_method.num_draws);
    outcomes.reserve(static_cast<std::size_t>(cfg.score_method.num_draws));
    for (int i = 0; i < cfg.score_method.num_draws; ++i)
      outcomes.emplace_back(w, sample_round(env, eval));
  }

  if (assigns_by_estimates(policy)) {
    double sentinel = cfg.sentinel_scale * static_cast<double>(env.K);
    double total = 0.0;
    for (const auto& [prob, real] : outcomes) {
      std::vector<ArmMode> arms;
      arms.reserve(static_cast<std::size_t>(env.M));
      for (int m = 0; m < env.M; ++m) {
        std::size_t mi = static_cast<std::size_t>(m);
        if (probed[mi]) {
          arms.push_back(ArmMode::probed(real.resources[mi], real.rewards[mi]));
        } else {
          std::vector<double> means(static_cast<std::size_t>(env.K));
          for (int k = 0; k < env.K; ++k)
            means[static_cast<std::size_t>(k)] =
                est.ucb(m, k, sentinel, cfg.clamp_ucb);
          arms.push_back(ArmMode::unprobed(std::move(means), est.pmf_hat(m)));
        }
      }
      ActionProfile prof = optimal_assignment(arms, env.K).profile;
      total += prob *
               profile_value_under_truth(env, probed, prof, real, true_means);
    }
    return (1.0 - alpha) * total;
  }

  // Random-assignment rule: each play lands independently and uniformly on one
  // of the M arms or stays unassigned.
  long long space = 1;
  bool enumerate = true;
  for (int k = 0; k < env.K; ++k) {
    space *= env.M + 1;
    if (space > cfg.score_profile_cap) {
      enumerate = false;
      break;
    }
  }

  std::vector<ActionProfile> profiles;
  if (enumerate) {
    std::vector<int> digits(static_cast<std::size_t>(env.K), 0);
    while (true) {
      ActionProfile prof;
      prof.plays.assign(static_cast<std::size_t>(env.M), {});
      for (int k = 0; k < env.K; ++k) {
        int c = digits[static_cast<std::size_t>(k)];
        if (c > 0) prof.plays[static_cast<std::size_t>(c - 1)].push_back(k);
      }
      profiles.push_back(std::move(prof));
      int pos = 0;
      while (pos < env.K) {
        if (++digits[static_cast<std::size_t>(pos)] <= env.M) break;
        digits[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == env.K) break;
    }
  } else {
    Rng prof_rng =
        Rng(cfg.score_seed).fork(static_cast<std::uint64_t>(t)).fork(7);
    const int samples = 512;
    profiles.reserve(samples);
    for (int s = 0; s < samples; ++s) {
      ActionProfile prof;
      prof.plays.assign(static_cast<std::size_t>(env.M), {});
      for (int k = 0; k < env.K; ++k) {
        std::size_t c = prof_rng.uniform_index(
            static_cast<std::size_t>(env.M) + 1);
        if (c > 0) prof.plays[c - 1].push_back(k);
      }
      profiles.push_back(std::move(prof));
    }
  }

  double total = 0.0;
  for (const ActionProfile& prof : profiles) {
    double ev = 0.0;
    for (const auto& [prob, real] : outcomes)
      ev += prob *
            profile_value_under_truth(env, probed, prof, real, true_means);
    total += ev;
  }
  total /= static_cast<double>(profiles.size());
  return (1.0 - alpha) * total;
}

}  // namespace

std::vector<RoundLog> run_policy(Policy policy, const Environment& env,
                                 const OnlineConfig& cfg, std::uint64_t seed) {
  env.validate();
  int I = env.budget();
  Estimators est(env.M, env.K, env.D_max, cfg.delta);
  Rng run_rng(seed);

  std::vector<std::vector<double>> true_means;
  true_means.reserve(static_cast<std::size_t>(env.M));
  for (int m = 0; m < env.M; ++m) true_means.push_back(env.mean_rewards(m));

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(std::max(cfg.T, 0)));

  for (int t = 1; t <= cfg.T; ++t) {
    Rng round_rng = run_rng.fork(static_cast<std::uint64_t>(t));
    Rng probe_rng = round_rng.fork(0);
    Rng realize_rng = round_rng.fork(1);
    Rng assign_rng = round_rng.fork(2);

    // Probing decision from the pre-round estimates.
    std::vector<int> S;
    if (policy == Policy::Olpa || policy == Policy::GreedyRandom) {
      if (I > 1) {
        Environment belief = est.belief(env.probing_cost);
        ExpectationMethod method = cfg.probe_method;
        if (method.kind == ExpectationMethod::Kind::MonteCarlo)
          method.seed = probe_rng.next();
        S = greedy_probe(belief, method).probe_set;
      }
    } else if (policy == Policy::RandomRandom) {
      int cap = std::min(I - 1, env.M);
      if (cap > 0) {
        std::size_t size =
            probe_rng.uniform_index(static_cast<std::size_t>(cap) + 1);
        std::vector<int> ids(static_cast<std::size_t>(env.M));
        std::iota(ids.begin(), ids.end(), 0);
        for (std::size_t i = 0; i < size; ++i) {
          std::size_t j =
              i + probe_rng.uniform_index(ids.size() - i);
          std::swap(ids[i], ids[j]);
        }
        S.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(S.begin(), S.end());
      }
    }

    RoundRealization real = sample_round(env, realize_rng);

    std::vector<bool> probed(static_cast<std::size_t>(env.M), false);
    for (int m : S) probed[static_cast<std::size_t>(m)] = true;

    int obs_resources = 0;
    int obs_rewards = 0;

    // Probing reveals the arm's resource count and every play's reward; the
    // estimates absorb that before the assignment is chosen.
    std::vector<Observation> probe_obs;
    probe_obs.reserve(S.size());
    for (int m : S) {
      std::size_t mi = static_cast<std::size_t>(m);
      Observation o;
      o.arm = m;
      o.resources = real.resources[mi];
      o.rewards.reserve(static_cast<std::size_t>(env.K));
      for (int k = 0; k < env.K; ++k)
        o.rewards.emplace_back(real.rewards[mi][static_cast<std::size_t>(k)]);
      probe_obs.push_back(std::move(o));
      ++obs_resources;
      obs_rewards += env.K;
    }
    update_estimates(est, probe_obs);

    // Assignment.
    ActionProfile profile;
    if (assigns_by_estimates(policy)) {
      double sentinel = cfg.sentinel_scale * static_cast<double>(env.K);
      std::vector<ArmMode> arms;
      arms.reserve(static_cast<std::size_t>(env.M));
      for (int m = 0; m < env.M; ++m) {
        std::size_t mi = static_cast<std::size_t>(m);
        if (probed[mi]) {
          arms.push_back(ArmMode::probed(real.resources[mi], real.rewards[mi]));
        } else {
          std::vector<double> means(static_cast<std::size_t>(env.K));
          for (int k = 0; k < env.K; ++k)
            means[static_cast<std::size_t>(k)] =
                est.ucb(m, k, sentinel, cfg.clamp_ucb);
          arms.push_back(ArmMode::unprobed(std::move(means), est.pmf_hat(m)));
        }
      }
      profile = optimal_assignment(arms, env.K).profile;
    } else {
      profile.plays.assign(static_cast<std::size_t>(env.M), {});
      for (int k = 0; k < env.K; ++k) {
        std::size_t c =
            assign_rng.uniform_index(static_cast<std::size_t>(env.M) + 1);
        if (c > 0) profile.plays[c - 1].push_back(k);
      }
    }

    // Serving: each arm grants its realized resources to its assigned plays,
    // probed arms by realized reward, unprobed arms by true-mean priority.
    double served_sum = 0.0;
    std::vector<Observation> assign_obs;
    for (int m = 0; m < env.M; ++m) {
      std::size_t mi = static_cast<std::size_t>(m);
      const auto& plays = profile.plays[mi];
      if (plays.empty()) continue;
      if (probed[mi]) {
        served_sum +=
            probed_arm_reward(plays, real.rewards[mi], real.resources[mi]);
        continue;
      }
      std::vector<int> order = plays;
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return true_means[mi][static_cast<std::size_t>(a)] >
               true_means[mi][static_cast<std::size_t>(b)];
      });
      std::size_t served = std::min<std::size_t>(
          static_cast<std::size_t>(real.resources[mi]), order.size());
      Observation o;
      o.arm = m;
      o.resources = real.resources[mi];
      o.rewards.assign(static_cast<std::size_t>(env.K), std::nullopt);
      for (std::size_t i = 0; i < served; ++i) {
        std::size_t k = static_cast<std::size_t>(order[i]);
        served_sum += real.rewards[mi][k];
        o.rewards[k] = real.rewards[mi][k];
        ++obs_rewards;
      }
      ++obs_resources;
      assign_obs.push_back(std::move(o));
    }

    double alpha = env.probing_cost.at(static_cast<int>(S.size()));
    double realized = alpha >= 1.0 ? 0.0 : (1.0 - alpha) * served_sum;

    double score = round_score(policy, env, cfg, est, S, t, true_means);

    // Served-play feedback lands after the round's decisions are scored.
    update_estimates(est, assign_obs);

    RoundLog log;
    log.t = t;
    log.probe_set = S;
    log.profile = std::move(profile);
    log.realized_reward = realized;
    log.score = score;
    log.obs_resources = obs_resources;
    log.obs_rewards = obs_rewards;
    logs.push_back(std::move(log));

    PUCS_LOG_DEBUG("policy " << policy_id(policy) << " t=" << t
                             << " |S|=" << S.size() << " score=" << score);
  }
  return logs;
}

}  // namespace pucs
