#include "pucs/probing.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

#include "pucs/assignment.hpp"

namespace pucs {

ExpectationMethod ExpectationMethod::exact(long long limit) {
  ExpectationMethod m;
  m.kind = Kind::Exact;
  m.exact_limit = limit;
  return m;
}

ExpectationMethod ExpectationMethod::monte_carlo(int num_draws,
                                                 std::uint64_t seed) {
  if (num_draws < 1)
    throw std::invalid_argument("monte carlo: need at least one draw");
  ExpectationMethod m;
  m.kind = Kind::MonteCarlo;
  m.num_draws = num_draws;
  m.seed = seed;
  return m;
}

SampleTable make_sample_table(const Environment& env,
                              const ExpectationMethod& method) {
  SampleTable table;
  Rng rng(method.seed);
  table.draws.reserve(static_cast<std::size_t>(method.num_draws));
  for (int w = 0; w < method.num_draws; ++w)
    table.draws.push_back(sample_round(env, rng));
  return table;
}

long long exact_outcome_count(const Environment& env,
                              const std::vector<int>& probe_set) {
  const long long cap = 1'000'000'000'000LL;
  long long count = 1;
  for (int m : probe_set) {
    long long arm = 0;
    for (double p : env.resource_pmfs[static_cast<std::size_t>(m)].probs)
      if (p > 0.0) ++arm;
    for (int k = 0; k < env.K; ++k) {
      long long vals = 0;
      for (double p : env.reward_dists[static_cast<std::size_t>(m)]
                                      [static_cast<std::size_t>(k)]
                                          .probs)
        if (p > 0.0) ++vals;
      if (arm > cap / std::max(vals, 1LL)) return cap;
      arm *= vals;
    }
    if (count > cap / std::max(arm, 1LL)) return cap;
    count *= arm;
  }
  return count;
}

namespace {

// Walks the joint support of the probed arms, filling their entries of a
// full-size realization and invoking fn with the product probability.
void enumerate_outcomes(
    const Environment& env, const std::vector<int>& probe_set,
    const std::function<void(double, const RoundRealization&)>& fn) {
  RoundRealization real;
  real.resources.assign(static_cast<std::size_t>(env.M), 1);
  real.rewards.assign(static_cast<std::size_t>(env.M),
                      std::vector<double>(static_cast<std::size_t>(env.K), 0.0));

  std::function<void(std::size_t, int, double)> rec =
      [&](std::size_t si, int k, double prob) {
        if (si == probe_set.size()) {
          fn(prob, real);
          return;
        }
        int m = probe_set[si];
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
}

void check_probe_set(const Environment& env, const std::vector<int>& S) {
  if (static_cast<int>(S.size()) > env.M)
    throw std::invalid_argument("probing set larger than the arm count");
  for (int m : S)
    if (m < 0 || m >= env.M)
      throw std::invalid_argument("probing set: arm id out of range");
}

void check_exact_gate(const Environment& env, const std::vector<int>& S,
                      const ExpectationMethod& method) {
  long long count = exact_outcome_count(env, S);
  if (count > method.exact_limit)
    throw std::runtime_error(
        "exact expectation needs " + std::to_string(count) +
        " outcomes, above the limit of " + std::to_string(method.exact_limit) +
        "; use Monte Carlo evaluation instead");
}

double expect_h(const Environment& env, const std::vector<int>& S,
                const ExpectationMethod& method, const SampleTable* table,
                bool probed_only) {
  auto value_of = [&](const RoundRealization& real) {
    return probed_only ? h_prob(S, real, env) : h_total(S, real, env).value;
  };
  if (method.kind == ExpectationMethod::Kind::Exact) {
    check_exact_gate(env, S, method);
    double total = 0.0;
    enumerate_outcomes(env, S,
                       [&](double prob, const RoundRealization& real) {
                         total += prob * value_of(real);
                       });
    return total;
  }
  SampleTable local;
  if (table == nullptr) {
    local = make_sample_table(env, method);
    table = &local;
  }
  double total = 0.0;
  for (const auto& draw : table->draws) total += value_of(draw);
  return total / static_cast<double>(table->draws.size());
}

double r_with(const Environment& env, const std::vector<int>& S,
              const ExpectationMethod& method, const SampleTable* table) {
  double alpha = env.probing_cost.at(static_cast<int>(S.size()));
  if (alpha >= 1.0) return 0.0;  // exact: the factor annihilates the value
  return (1.0 - alpha) * expect_h(env, S, method, table, false);
}

}  // namespace

double f_prob(const Environment& env, const std::vector<int>& probe_set,
              const ExpectationMethod& method) {
  check_probe_set(env, probe_set);
  if (probe_set.empty()) return 0.0;
  return expect_h(env, probe_set, method, nullptr, true);
}

double f_total(const Environment& env, const std::vector<int>& probe_set,
               const ExpectationMethod& method) {
  check_probe_set(env, probe_set);
  return expect_h(env, probe_set, method, nullptr, false);
}

double r_of(const Environment& env, const std::vector<int>& probe_set,
            const ExpectationMethod& method) {
  check_probe_set(env, probe_set);
  if (static_cast<int>(probe_set.size()) > env.budget())
    throw std::invalid_argument("R(S): probing set exceeds the budget");
  return r_with(env, probe_set, method, nullptr);
}

ProbePlan greedy_probe(const Environment& env,
                       const ExpectationMethod& method) {
  env.probing_cost.validate();
  int I = env.budget();

  SampleTable table;
  const SampleTable* shared = nullptr;
  if (method.kind == ExpectationMethod::Kind::MonteCarlo) {
    table = make_sample_table(env, method);
    shared = &table;
  }

  double blind = f_unprobed({}, env);

  // Prefix values f_prob(S_i) for i = 0..I-1, grown by best marginal gain.
  std::vector<std::vector<int>> prefixes = {{}};
  std::vector<double> prefix_value = {0.0};
  std::vector<int> current;
  double current_value = 0.0;
  for (int i = 1; i <= I - 1; ++i) {
    int best_arm = -1;
    double best_value = current_value;
    for (int m = 0; m < env.M; ++m) {
      if (std::find(current.begin(), current.end(), m) != current.end())
        continue;
      std::vector<int> candidate = current;
      candidate.push_back(m);
      std::sort(candidate.begin(), candidate.end());
      double value = expect_h(env, candidate, method, shared, true);
      if (best_arm == -1 || value > best_value) {
        best_arm = m;
        best_value = value;
      }
    }
    if (best_arm >= 0) {
      current.push_back(best_arm);
      std::sort(current.begin(), current.end());
      current_value = best_value;
    }
    prefixes.push_back(current);
    prefix_value.push_back(current_value);
  }

  int best_i = 0;
  double best_score = 0.0;  // (1 - alpha(0)) * f_prob(empty) = 0
  for (int i = 1; i < static_cast<int>(prefixes.size()); ++i) {
    double score = (1.0 - env.probing_cost.at(i)) *
                   prefix_value[static_cast<std::size_t>(i)];
    if (score > best_score) {
      best_score = score;
      best_i = i;
    }
  }

  ProbePlan plan;
  plan.method = method;
  if (best_score < blind) {
    plan.probe_set = {};
    plan.value = blind;  // R(empty) = f_unprobed(empty)
    return plan;
  }
  plan.probe_set = prefixes[static_cast<std::size_t>(best_i)];
  plan.value = r_with(env, plan.probe_set, method, shared);
  return plan;
}

ProbePlan exhaustive_optimal_probe(const Environment& env,
                                   const ExpectationMethod& method,
                                   int max_arms) {
  if (env.M > max_arms)
    throw std::runtime_error(
        "exhaustive search gated at " + std::to_string(max_arms) +
        " arms (got " + std::to_string(env.M) + ")");
  int I = env.budget();

  SampleTable table;
  const SampleTable* shared = nullptr;
  if (method.kind == ExpectationMethod::Kind::MonteCarlo) {
    table = make_sample_table(env, method);
    shared = &table;
  }

  std::vector<std::vector<int>> subsets;
  for (std::uint32_t mask = 0; mask < (1u << env.M); ++mask) {
    std::vector<int> S;
    for (int m = 0; m < env.M; ++m)
      if (mask & (1u << m)) S.push_back(m);
    if (static_cast<int>(S.size()) <= I) subsets.push_back(std::move(S));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  ProbePlan plan;
  plan.method = method;
  bool first = true;
  for (const auto& S : subsets) {
    double value = r_with(env, S, method, shared);
    if (first || value > plan.value) {
      plan.probe_set = S;
      plan.value = value;
      first = false;
    }
  }
  return plan;
}

}  // namespace pucs
