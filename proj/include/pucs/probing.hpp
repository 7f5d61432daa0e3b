#pragma once

#include <cstdint>
#include <vector>

#include "pucs/environment.hpp"

namespace pucs {

// How expectations over probing realizations are evaluated: exact enumeration
// of the probed arms' joint support (rejected beyond exact_limit outcomes),
// or seeded Monte Carlo with num_draws common-random-number samples.
struct ExpectationMethod {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  int num_draws = 200;
  std::uint64_t seed = 0;
  long long exact_limit = 100000;

  static ExpectationMethod exact(long long limit = 100000);
  static ExpectationMethod monte_carlo(int num_draws, std::uint64_t seed);
};

struct ProbePlan {
  std::vector<int> probe_set;  // ascending arm ids
  double value = 0.0;          // R(probe_set) under the evaluating environment
  ExpectationMethod method;
};

// Joint realization draws shared across candidate sets (common random
// numbers) within one greedy or exhaustive evaluation.
struct SampleTable {
  std::vector<RoundRealization> draws;
};

SampleTable make_sample_table(const Environment& env,
                              const ExpectationMethod& method);

// Expected optimal value over probed arms only:  E[h_prob(S, .)].
double f_prob(const Environment& env, const std::vector<int>& probe_set,
              const ExpectationMethod& method);

// Expected optimal value over all arms:  E[h_total(S, .)].
double f_total(const Environment& env, const std::vector<int>& probe_set,
               const ExpectationMethod& method);

// R(S) = (1 - alpha(|S|)) * f_total(S); throws when |S| exceeds the budget.
double r_of(const Environment& env, const std::vector<int>& probe_set,
            const ExpectationMethod& method);

// Greedy probing: grow S by the best marginal f_prob gain for I-1 steps
// (ties toward the lower arm id), pick the prefix maximizing
// (1 - alpha(i)) * f_prob(S_i), and fall back to the empty set when even the
// best prefix scores below the purely unprobed value.
ProbePlan greedy_probe(const Environment& env, const ExpectationMethod& method);

// Brute-force optimum over all subsets with |S| <= I; ties prefer smaller,
// then lexicographically earlier sets. Guarded by max_arms (default 12).
ProbePlan exhaustive_optimal_probe(const Environment& env,
                                   const ExpectationMethod& method,
                                   int max_arms = 12);

// Number of outcomes exact enumeration would visit for this probe set.
long long exact_outcome_count(const Environment& env,
                              const std::vector<int>& probe_set);

}  // namespace pucs
