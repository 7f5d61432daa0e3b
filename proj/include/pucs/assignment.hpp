#pragma once

#include <vector>

#include "pucs/distributions.hpp"
#include "pucs/environment.hpp"

namespace pucs {

// Per-arm state used when computing an optimal assignment. Probed arms expose
// their realized resource count and rewards; unprobed arms expose mean
// estimates (which may exceed 1 under optimism) and a resource PMF; excluded
// arms accept no plays.
struct ArmMode {
  enum class Kind { Probed, Unprobed, Excluded };
  Kind kind = Kind::Excluded;
  int n_resources = 0;          // Probed
  std::vector<double> rewards;  // Probed: realized X, length K
  std::vector<double> means;    // Unprobed: per-play means, length K
  ResourcePmf pmf;              // Unprobed

  static ArmMode probed(int n_resources, std::vector<double> rewards);
  static ArmMode unprobed(std::vector<double> means, ResourcePmf pmf);
  static ArmMode excluded();
};

struct AssignmentResult {
  ActionProfile profile;
  double value = 0.0;
};

// Optimal play-to-arm assignment via maximum-weight matching on a plays x
// slots matrix: a probed arm contributes one slot per resource unit weighted
// by the play's realized reward; an unprobed arm contributes slots i=1..K
// weighted by mean * P(N >= i). Matched plays inside an unprobed arm are
// re-ordered so larger means occupy earlier slots (value-preserving).
AssignmentResult optimal_assignment(const std::vector<ArmMode>& arms, int K);

// Optimal value using probed arms only (others excluded).
double h_prob(const std::vector<int>& probe_set,
              const RoundRealization& realization, const Environment& env);

// Optimal value and profile over all arms, probed realizations substituted.
AssignmentResult h_total(const std::vector<int>& probe_set,
                         const RoundRealization& realization,
                         const Environment& env);

// Optimal value using unprobed arms only (arms in probe_set excluded).
double f_unprobed(const std::vector<int>& probe_set, const Environment& env);

}  // namespace pucs
