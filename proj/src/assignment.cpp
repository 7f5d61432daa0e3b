#include "pucs/assignment.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "pucs/matching.hpp"

namespace pucs {

ArmMode ArmMode::probed(int n_resources, std::vector<double> rewards) {
  ArmMode a;
  a.kind = Kind::Probed;
  a.n_resources = n_resources;
  a.rewards = std::move(rewards);
  return a;
}

ArmMode ArmMode::unprobed(std::vector<double> means, ResourcePmf pmf) {
  ArmMode a;
  a.kind = Kind::Unprobed;
  a.means = std::move(means);
  a.pmf = std::move(pmf);
  return a;
}

ArmMode ArmMode::excluded() {
  ArmMode a;
  a.kind = Kind::Excluded;
  return a;
}

AssignmentResult optimal_assignment(const std::vector<ArmMode>& arms, int K) {
  int M = static_cast<int>(arms.size());

  // Column c belongs to arm slot_arm[c]; a probed arm materializes one slot
  // per resource unit (capped at K, extra units cannot serve anyone) all
  // carrying the play's realized reward, an unprobed arm materializes slots
  // i = 1..K discounted by P(N >= i).
  std::vector<int> slot_arm;
  std::vector<double> slot_discount;  // survival factor; probed slots use 1
  std::vector<bool> slot_probed;
  for (int m = 0; m < M; ++m) {
    const ArmMode& a = arms[static_cast<std::size_t>(m)];
    if (a.kind == ArmMode::Kind::Probed) {
      int copies = std::min(a.n_resources, K);
      for (int s = 0; s < copies; ++s) {
        slot_arm.push_back(m);
        slot_discount.push_back(1.0);
        slot_probed.push_back(true);
      }
    } else if (a.kind == ArmMode::Kind::Unprobed) {
      for (int i = 1; i <= K; ++i) {
        slot_arm.push_back(m);
        slot_discount.push_back(a.pmf.survival(i));
        slot_probed.push_back(false);
      }
    }
  }

  AssignmentResult result;
  result.profile.plays.assign(static_cast<std::size_t>(M), {});
  if (slot_arm.empty() || K == 0) return result;

  std::vector<std::vector<double>> weights(
      static_cast<std::size_t>(K),
      std::vector<double>(slot_arm.size(), 0.0));
  for (int k = 0; k < K; ++k)
    for (std::size_t c = 0; c < slot_arm.size(); ++c) {
      const ArmMode& a = arms[static_cast<std::size_t>(slot_arm[c])];
      double base = slot_probed[c] ? a.rewards[static_cast<std::size_t>(k)]
                                   : a.means[static_cast<std::size_t>(k)];
      weights[static_cast<std::size_t>(k)][c] = base * slot_discount[c];
    }

  auto matching = max_weight_matching(weights);
  for (auto [k, c] : matching.edges)
    result.profile.plays[static_cast<std::size_t>(slot_arm[static_cast<std::size_t>(c)])]
        .push_back(k);
  for (auto& set : result.profile.plays) std::sort(set.begin(), set.end());

  // Re-derive the value from the canonical per-arm formulas. For unprobed
  // arms this is the descending-mean reordering of the matched plays across
  // slots; at a matching optimum the rearrangement cannot change the total.
  double value = 0.0;
  for (int m = 0; m < M; ++m) {
    const ArmMode& a = arms[static_cast<std::size_t>(m)];
    const auto& plays = result.profile.plays[static_cast<std::size_t>(m)];
    if (a.kind == ArmMode::Kind::Probed)
      value += probed_arm_reward(plays, a.rewards, a.n_resources);
    else if (a.kind == ArmMode::Kind::Unprobed)
      value += expected_arm_reward(plays, a.means, a.pmf);
  }
  result.value = value;
  return result;
}

namespace {

std::vector<ArmMode> arm_modes(const std::vector<int>& probe_set,
                               const RoundRealization& realization,
                               const Environment& env, bool exclude_unprobed,
                               bool exclude_probed) {
  std::vector<bool> probed(static_cast<std::size_t>(env.M), false);
  for (int m : probe_set) {
    if (m < 0 || m >= env.M)
      throw std::invalid_argument("probing set: arm id out of range");
    probed[static_cast<std::size_t>(m)] = true;
  }
  std::vector<ArmMode> arms;
  arms.reserve(static_cast<std::size_t>(env.M));
  for (int m = 0; m < env.M; ++m) {
    if (probed[static_cast<std::size_t>(m)]) {
      if (exclude_probed) {
        arms.push_back(ArmMode::excluded());
      } else {
        arms.push_back(ArmMode::probed(
            realization.resources[static_cast<std::size_t>(m)],
            realization.rewards[static_cast<std::size_t>(m)]));
      }
    } else if (exclude_unprobed) {
      arms.push_back(ArmMode::excluded());
    } else {
      arms.push_back(ArmMode::unprobed(
          env.mean_rewards(m),
          env.resource_pmfs[static_cast<std::size_t>(m)]));
    }
  }
  return arms;
}

}  // namespace

double h_prob(const std::vector<int>& probe_set,
              const RoundRealization& realization, const Environment& env) {
  if (probe_set.empty()) return 0.0;
  return optimal_assignment(arm_modes(probe_set, realization, env, true, false),
                            env.K)
      .value;
}

AssignmentResult h_total(const std::vector<int>& probe_set,
                         const RoundRealization& realization,
                         const Environment& env) {
  return optimal_assignment(
      arm_modes(probe_set, realization, env, false, false), env.K);
}

double f_unprobed(const std::vector<int>& probe_set, const Environment& env) {
  RoundRealization unused;
  unused.resources.assign(static_cast<std::size_t>(env.M), 1);
  unused.rewards.assign(static_cast<std::size_t>(env.M),
                        std::vector<double>(static_cast<std::size_t>(env.K), 0.0));
  return optimal_assignment(arm_modes(probe_set, unused, env, false, true),
                            env.K)
      .value;
}

}  // namespace pucs
