#pragma once

#include <vector>

#include "pucs/rng.hpp"

namespace pucs {

// Finite reward distribution on a strictly ascending support within [0, 1].
struct DiscreteDistribution {
  std::vector<double> support;
  std::vector<double> probs;

  double mean() const;
  double sample(Rng& rng) const;
  // Throws std::invalid_argument on malformed support/probabilities.
  void validate() const;

  static DiscreteDistribution point_mass(double v);
  static DiscreteDistribution bernoulli(double mu);  // support {0, 1}
};

// Distribution of a per-round resource count on {1, ..., D_max}.
// probs[d-1] = P(N = d).
struct ResourcePmf {
  std::vector<double> probs;

  int d_max() const { return static_cast<int>(probs.size()); }
  double mean() const;
  // P(N >= i) for i >= 1; survival(1) == 1 by normalization, 0 past d_max.
  double survival(int i) const;
  int sample(Rng& rng) const;
  void validate() const;

  static ResourcePmf uniform(int d_max);
  static ResourcePmf point_mass(int d, int d_max);
};

// Probing cost schedule alpha(0..I); alpha(0)=0, alpha(I)=1, nondecreasing.
struct ProbingCost {
  std::vector<double> alpha;  // size I+1

  int budget() const { return static_cast<int>(alpha.size()) - 1; }  // I
  double at(int i) const;
  void validate() const;

  static ProbingCost linear(int budget);  // alpha(i) = i/I
};

}  // namespace pucs
