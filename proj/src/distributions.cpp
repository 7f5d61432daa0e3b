#include "pucs/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pucs {

namespace {

void check_probs(const std::vector<double>& probs, const char* what) {
  if (probs.empty())
    throw std::invalid_argument(std::string(what) + ": no probabilities");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0))
      throw std::invalid_argument(std::string(what) +
                                  ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(what) +
                                ": probabilities sum to " + std::to_string(sum));
}

// Inverse-CDF draw over probs; the last positive atom absorbs the rounding
// tail so a uniform draw of ~1 cannot fall off the end.
std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform01();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  return last_positive;
}

}  // namespace

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probs[i];
  return m;
}

double DiscreteDistribution::sample(Rng& rng) const {
  return support[sample_index(probs, rng)];
}

void DiscreteDistribution::validate() const {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument("reward distribution: support/probs mismatch");
  check_probs(probs, "reward distribution");
  for (std::size_t i = 0; i < support.size(); ++i) {
    double v = support[i];
    if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12)
      throw std::invalid_argument("reward distribution: value outside [0,1]");
    if (i > 0 && !(support[i - 1] < v))
      throw std::invalid_argument(
          "reward distribution: support not strictly ascending");
  }
}

DiscreteDistribution DiscreteDistribution::point_mass(double v) {
  DiscreteDistribution d;
  d.support = {v};
  d.probs = {1.0};
  d.validate();
  return d;
}

DiscreteDistribution DiscreteDistribution::bernoulli(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("bernoulli mean outside [0,1]");
  DiscreteDistribution d;
  d.support = {0.0, 1.0};
  d.probs = {1.0 - mu, mu};
  return d;
}

double ResourcePmf::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    m += static_cast<double>(i + 1) * probs[i];
  return m;
}

double ResourcePmf::survival(int i) const {
  if (i <= 1) return 1.0;
  if (i > d_max()) return 0.0;
  double tail = 0.0;
  for (std::size_t d = static_cast<std::size_t>(i - 1); d < probs.size(); ++d)
    tail += probs[d];
  return tail;
}

int ResourcePmf::sample(Rng& rng) const {
  return static_cast<int>(sample_index(probs, rng)) + 1;
}

void ResourcePmf::validate() const { check_probs(probs, "resource pmf"); }

ResourcePmf ResourcePmf::uniform(int d_max) {
  if (d_max < 1) throw std::invalid_argument("resource pmf: d_max < 1");
  ResourcePmf p;
  p.probs.assign(static_cast<std::size_t>(d_max),
                 1.0 / static_cast<double>(d_max));
  return p;
}

ResourcePmf ResourcePmf::point_mass(int d, int d_max) {
  if (d < 1 || d > d_max)
    throw std::invalid_argument("resource pmf: point mass outside support");
  ResourcePmf p;
  p.probs.assign(static_cast<std::size_t>(d_max), 0.0);
  p.probs[static_cast<std::size_t>(d - 1)] = 1.0;
  return p;
}

double ProbingCost::at(int i) const {
  if (i < 0 || i >= static_cast<int>(alpha.size()))
    throw std::out_of_range("probing cost: index outside 0..I");
  return alpha[static_cast<std::size_t>(i)];
}

void ProbingCost::validate() const {
  if (alpha.size() < 2)
    throw std::invalid_argument("probing cost: need alpha(0..I) with I >= 1");
  if (std::abs(alpha.front()) > 1e-12)
    throw std::invalid_argument("probing cost: alpha(0) must be 0");
  if (std::abs(alpha.back() - 1.0) > 1e-12)
    throw std::invalid_argument("probing cost: alpha(I) must be 1");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double a = alpha[i];
    if (!(a >= -1e-12 && a <= 1.0 + 1e-12))
      throw std::invalid_argument("probing cost: alpha outside [0,1]");
    if (i > 0 && a < alpha[i - 1] - 1e-12)
      throw std::invalid_argument("probing cost: alpha must be nondecreasing");
  }
}

ProbingCost ProbingCost::linear(int budget) {
  if (budget < 1) throw std::invalid_argument("probing cost: budget < 1");
  ProbingCost c;
  c.alpha.resize(static_cast<std::size_t>(budget) + 1);
  for (int i = 0; i <= budget; ++i)
    c.alpha[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(budget);
  return c;
}

}  // namespace pucs
