#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pucs/environment.hpp"
#include "util.hpp"

using namespace pucs;
using testutil::cost;
using testutil::dist;
using testutil::make_env;
using testutil::pmf;

namespace {

Environment degenerate_env() {
  // Two arms, two plays, every distribution a point mass.
  return make_env(
      2, {pmf({1.0}), pmf({1.0})},
      {{dist({0.5}, {1.0}), dist({0.5}, {1.0})},
       {dist({0.5}, {1.0}), dist({0.5}, {1.0})}},
      cost({0.0, 1.0}));
}

}  // namespace

TEST_CASE("environment validation checks dimensions") {
  auto env = degenerate_env();
  CHECK_NOTHROW(env.validate());
  CHECK(env.mean_reward(0, 0) == doctest::Approx(0.5));
  CHECK(env.mean_rewards(1) == std::vector<double>{0.5, 0.5});
  CHECK(env.budget() == 1);

  auto broken = env;
  broken.reward_dists.pop_back();
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  auto broken2 = env;
  broken2.D_max = 3;  // pmfs are length 1
  CHECK_THROWS_AS(broken2.validate(), std::invalid_argument);
}

TEST_CASE("sample_round on degenerate distributions") {
  auto env = degenerate_env();
  Rng rng(1);
  auto real = sample_round(env, rng);
  CHECK(real.resources == std::vector<int>{1, 1});
  for (const auto& row : real.rewards)
    for (double x : row) CHECK(x == 0.5);
}

TEST_CASE("sample_round is deterministic given the seed") {
  Rng r1(77), r2(77);
  auto env = testutil::worked_instance();
  for (int t = 0; t < 20; ++t) {
    auto a = sample_round(env, r1);
    auto b = sample_round(env, r2);
    CHECK(a.resources == b.resources);
    CHECK(a.rewards == b.rewards);
  }
}

TEST_CASE("sample_round matches the pmf frequencies") {
  auto env = make_env(1, {pmf({0.4, 0.6})}, {{dist({0.5}, {1.0})}},
                      cost({0.0, 1.0}));
  Rng rng(13);
  int twos = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    if (sample_round(env, rng).resources[0] == 2) ++twos;
  CHECK(static_cast<double>(twos) / n == doctest::Approx(0.6).epsilon(0.017));
}

TEST_CASE("probed arm reward takes the top rewards") {
  std::vector<double> x = {0.3, 0.9};
  CHECK(probed_arm_reward({0, 1}, x, 2) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(probed_arm_reward({0, 1}, x, 1) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(probed_arm_reward({}, x, 2) == 0.0);
}

TEST_CASE("probed arm reward monotone in resources and plays") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int K = 1 + static_cast<int>(rng.uniform_index(4));
    std::vector<double> x(static_cast<std::size_t>(K));
    for (double& v : x) v = rng.uniform01();
    std::vector<int> all(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) all[static_cast<std::size_t>(k)] = k;
    std::vector<int> sub;
    for (int k = 0; k < K; ++k)
      if (rng.uniform01() < 0.5) sub.push_back(k);
    int n = 1 + static_cast<int>(rng.uniform_index(4));
    CHECK(probed_arm_reward(sub, x, n) <= probed_arm_reward(all, x, n) + 1e-12);
    CHECK(probed_arm_reward(all, x, n) <= probed_arm_reward(all, x, n + 1) + 1e-12);
    CHECK(probed_arm_reward(sub, x, n) ==
          doctest::Approx(oracle::probed_value(sub, x, n)).epsilon(1e-12));
  }
}

TEST_CASE("expected arm reward worked examples") {
  auto p2 = pmf({0.4, 0.6});
  CHECK(expected_arm_reward({}, {0.8, 0.5}, p2) == 0.0);
  CHECK(expected_arm_reward({0, 1}, {0.8, 0.5}, p2) ==
        doctest::Approx(1.10).epsilon(1e-12));
  // single play: survival(1) = 1 regardless of pmf
  CHECK(expected_arm_reward({1}, {0.8, 0.5}, p2) ==
        doctest::Approx(0.5).epsilon(1e-12));
  auto p3 = pmf({0.2, 0.3, 0.5});
  CHECK(expected_arm_reward({0}, {0.5}, p3) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expected arm reward equals the double-sum form") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    int K = 1 + static_cast<int>(rng.uniform_index(4));
    int D = 1 + static_cast<int>(rng.uniform_index(4));
    std::vector<double> mu(static_cast<std::size_t>(K));
    for (double& v : mu) v = rng.uniform01();
    std::vector<double> probs(static_cast<std::size_t>(D));
    double sum = 0.0;
    for (double& v : probs) {
      v = rng.uniform01() + 0.01;
      sum += v;
    }
    for (double& v : probs) v /= sum;
    std::vector<int> plays;
    for (int k = 0; k < K; ++k)
      if (rng.uniform01() < 0.7) plays.push_back(k);
    auto rp = pmf(probs);
    double impl = expected_arm_reward(plays, mu, rp);
    double ref = oracle::unprobed_value(plays, mu, probs);
    CHECK(impl == doctest::Approx(ref).epsilon(1e-12));
    // permutation invariance: reversed play order gives the same value
    std::vector<int> rev(plays.rbegin(), plays.rend());
    CHECK(expected_arm_reward(rev, mu, rp) == doctest::Approx(impl).epsilon(1e-12));
  }
}

TEST_CASE("total reward applies the probing discount") {
  // Probed sum 1.0 and unprobed sum 0.5 under alpha(1)=0.2 gives 0.8 * 1.5.
  auto env = make_env(
      1, {pmf({1.0}), pmf({1.0})},
      {{dist({1.0}, {1.0})}, {dist({0.5}, {1.0})}},
      cost({0.0, 0.2, 1.0}));
  RoundRealization real;
  real.resources = {1, 1};
  real.rewards = {{1.0}, {0.5}};
  ActionProfile profile;
  profile.plays = {{0}, {}};
  ActionProfile profile2;
  profile2.plays = {{}, {0}};

  SUBCASE("no probing means plain expected sum") {
    CHECK(total_reward(env, {}, profile2, real) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("one probe scales by 1 - alpha(1)") {
    CHECK(total_reward(env, {0}, profile, real) ==
          doctest::Approx(0.8 * 1.0).epsilon(1e-12));
  }
  SUBCASE("full budget zeroes the reward") {
    CHECK(total_reward(env, {0, 1}, profile, real) == 0.0);
  }
}

TEST_CASE("total reward rejects oversized probing sets") {
  auto env = testutil::worked_instance();  // I = 2
  RoundRealization real;
  real.resources = {1, 1};
  real.rewards = {{1.0}, {0.4}};
  ActionProfile profile;
  profile.plays = {{0}, {}};
  CHECK_THROWS_AS(total_reward(env, {0, 1, 2}, profile, real),
                  std::invalid_argument);
}

TEST_CASE("action profile validation") {
  ActionProfile p;
  p.plays = {{0}, {0}};  // play 0 used twice
  CHECK_THROWS_AS(p.validate(2, 2), std::invalid_argument);
  p.plays = {{0}, {3}};  // play index out of range
  CHECK_THROWS_AS(p.validate(2, 2), std::invalid_argument);
  p.plays = {{0}};  // wrong arm count
  CHECK_THROWS_AS(p.validate(2, 2), std::invalid_argument);
  p.plays = {{1}, {0}};
  CHECK_NOTHROW(p.validate(2, 2));
  CHECK(p.total_plays() == 2);
}

TEST_CASE("environment json round-trip is lossless") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto env = testutil::random_env(rng);
    auto j = environment_to_json(env);
    auto back = environment_from_json(j);
    REQUIRE(back.M == env.M);
    REQUIRE(back.K == env.K);
    REQUIRE(back.D_max == env.D_max);
    for (int m = 0; m < env.M; ++m) {
      CHECK(back.resource_pmfs[static_cast<std::size_t>(m)].probs ==
            env.resource_pmfs[static_cast<std::size_t>(m)].probs);
      for (int k = 0; k < env.K; ++k) {
        const auto& a = back.reward_dists[static_cast<std::size_t>(m)]
                                         [static_cast<std::size_t>(k)];
        const auto& b = env.reward_dists[static_cast<std::size_t>(m)]
                                        [static_cast<std::size_t>(k)];
        CHECK(a.support == b.support);
        CHECK(a.probs == b.probs);
      }
    }
    CHECK(back.probing_cost.alpha == env.probing_cost.alpha);
  }
}

TEST_CASE("environment file save and load") {
  auto env = testutil::worked_instance();
  std::string path = "test_env_roundtrip.json";
  save_environment(env, path);
  auto back = load_environment(path);
  CHECK(back.M == 2);
  CHECK(back.reward_dists[0][0].support == std::vector<double>{0.0, 1.0});
  CHECK(back.probing_cost.alpha == env.probing_cost.alpha);
  std::remove(path.c_str());
}
