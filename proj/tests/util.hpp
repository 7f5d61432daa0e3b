#pragma once

// Shared helpers for the test suite: terse environment builders and the
// bounded random-instance generator used by the property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "pucs/distributions.hpp"
#include "pucs/environment.hpp"
#include "pucs/rng.hpp"

namespace pucs::testutil {

inline DiscreteDistribution dist(std::vector<double> support,
                                 std::vector<double> probs) {
  DiscreteDistribution d;
  d.support = std::move(support);
  d.probs = std::move(probs);
  d.validate();
  return d;
}

inline ResourcePmf pmf(std::vector<double> probs) {
  ResourcePmf p;
  p.probs = std::move(probs);
  p.validate();
  return p;
}

inline ProbingCost cost(std::vector<double> alpha) {
  ProbingCost c;
  c.alpha = std::move(alpha);
  c.validate();
  return c;
}

inline Environment make_env(int K, std::vector<ResourcePmf> pmfs,
                            std::vector<std::vector<DiscreteDistribution>> rewards,
                            ProbingCost probing) {
  Environment env;
  env.M = static_cast<int>(pmfs.size());
  env.K = K;
  env.D_max = pmfs.empty() ? 1 : pmfs[0].d_max();
  env.resource_pmfs = std::move(pmfs);
  env.reward_dists = std::move(rewards);
  env.probing_cost = std::move(probing);
  env.validate();
  return env;
}

// The two-arm instance used across offline tests: arm 0 rewards uniform on
// {0,1}, arm 1 point-mass 0.4, one play, one resource unit, alpha (0,0.1,1).
inline Environment worked_instance() {
  return make_env(
      1, {pmf({1.0}), pmf({1.0})},
      {{dist({0.0, 1.0}, {0.5, 0.5})}, {dist({0.4}, {1.0})}},
      cost({0.0, 0.1, 1.0}));
}

struct RandomEnvCaps {
  int max_M = 4;
  int max_K = 3;
  int max_D = 3;
  int max_support = 3;
  // Rejection bound on the full-arm-set joint support size, which dominates
  // every Exact evaluation the instance can trigger.
  long long max_outcomes = 3000;
};

inline Environment random_env(Rng& rng, const RandomEnvCaps& caps = {}) {
  for (;;) {
    int M = 1 + static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(caps.max_M)));
    int K = 1 + static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(caps.max_K)));
    int D = 1 + static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(caps.max_D)));
    int I = 1 + static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(M)));

    long long outcomes = 1;
    std::vector<ResourcePmf> pmfs;
    std::vector<std::vector<DiscreteDistribution>> rewards;
    for (int m = 0; m < M; ++m) {
      std::vector<double> probs(static_cast<std::size_t>(D));
      double sum = 0.0;
      for (double& p : probs) {
        p = 0.05 + rng.uniform01();
        sum += p;
      }
      for (double& p : probs) p /= sum;
      ResourcePmf rp;
      rp.probs = std::move(probs);
      pmfs.push_back(std::move(rp));
      outcomes *= D;

      std::vector<DiscreteDistribution> row;
      for (int k = 0; k < K; ++k) {
        int s = 1 + static_cast<int>(rng.uniform_index(
                        static_cast<std::uint64_t>(caps.max_support)));
        std::vector<double> support;
        for (int v = 0; v < s; ++v) {
          double x = rng.uniform01();
          bool clash = false;
          for (double y : support)
            if (std::abs(x - y) < 1e-6) clash = true;
          if (clash) {
            --v;
            continue;
          }
          support.push_back(x);
        }
        std::sort(support.begin(), support.end());
        std::vector<double> sp(static_cast<std::size_t>(s));
        double spsum = 0.0;
        for (double& p : sp) {
          p = 0.05 + rng.uniform01();
          spsum += p;
        }
        for (double& p : sp) p /= spsum;
        DiscreteDistribution d;
        d.support = std::move(support);
        d.probs = std::move(sp);
        row.push_back(std::move(d));
        outcomes *= s;
        if (outcomes > caps.max_outcomes) break;
      }
      rewards.push_back(std::move(row));
      if (outcomes > caps.max_outcomes) break;
    }
    if (outcomes > caps.max_outcomes) continue;

    std::vector<double> alpha(static_cast<std::size_t>(I) + 1);
    alpha[0] = 0.0;
    alpha[static_cast<std::size_t>(I)] = 1.0;
    for (int i = 1; i < I; ++i) alpha[static_cast<std::size_t>(i)] = rng.uniform01();
    std::sort(alpha.begin(), alpha.end());

    ProbingCost pc;
    pc.alpha = std::move(alpha);
    return make_env(K, std::move(pmfs), std::move(rewards), std::move(pc));
  }
}

}  // namespace pucs::testutil
