// End-to-end acceptance gate. Each criterion prints exactly one PASS/FAIL
// line with a short diagnostic and its runtime; the process exit code is the
// number of failed criteria. Criteria 7 and 8 share a single experiment run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pucs/assignment.hpp"
#include "pucs/harness.hpp"
#include "pucs/matching.hpp"
#include "pucs/olpa.hpp"
#include "pucs/probing.hpp"
#include "pucs/rng.hpp"
#include "util.hpp"

#ifndef PUCS_CLI_PATH
#define PUCS_CLI_PATH "pucs"
#endif

namespace {

using namespace pucs;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Criterion 1: on bounded random instances the greedy probing plan must score
// at least the guarantee factor times the exhaustive optimum, instance by
// instance.
Outcome check_offline_guarantee() {
  const double bound = 0.387392 - 1e-9;
  const int instances = 200;
  Rng rng(101);
  double min_ratio = 1e300;
  int failures = 0;
  for (int i = 0; i < instances; ++i) {
    Environment env = testutil::random_env(rng);
    ProbePlan greedy = greedy_probe(env, ExpectationMethod::exact());
    ProbePlan star = exhaustive_optimal_probe(env, ExpectationMethod::exact());
    double ratio = star.value <= 0.0 ? 1.0 : greedy.value / star.value;
    min_ratio = std::min(min_ratio, ratio);
    if (ratio < bound) ++failures;
  }
  std::ostringstream os;
  os << "greedy/optimal ratio >= " << bound << " on " << (instances - failures)
     << "/" << instances << " instances, min ratio " << min_ratio;
  return {failures == 0, os.str()};
}

// Criterion 2: decomposition, monotonicity, and submodularity of the
// expected-value functions on bounded random instances under exact
// evaluation.
Outcome check_structural_lemmas() {
  const double tol = 1e-9;
  const int instances = 100;
  Rng rng(202);
  int bad_decomp = 0, bad_unprobed = 0, bad_prob = 0, bad_submod = 0;
  for (int i = 0; i < instances; ++i) {
    Environment env = testutil::random_env(rng);
    int M = env.M;
    int masks = 1 << M;
    std::vector<double> fp(static_cast<std::size_t>(masks));
    std::vector<double> fu(static_cast<std::size_t>(masks));
    std::vector<double> ft(static_cast<std::size_t>(masks));
    auto set_of = [&](int mask) {
      std::vector<int> s;
      for (int m = 0; m < M; ++m)
        if (mask & (1 << m)) s.push_back(m);
      return s;
    };
    for (int mask = 0; mask < masks; ++mask) {
      std::vector<int> s = set_of(mask);
      fp[static_cast<std::size_t>(mask)] =
          f_prob(env, s, ExpectationMethod::exact());
      fu[static_cast<std::size_t>(mask)] = f_unprobed(s, env);
      ft[static_cast<std::size_t>(mask)] =
          f_total(env, s, ExpectationMethod::exact());
    }
    for (int mask = 0; mask < masks; ++mask) {
      if (ft[static_cast<std::size_t>(mask)] >
          fp[static_cast<std::size_t>(mask)] +
              fu[static_cast<std::size_t>(mask)] + tol)
        ++bad_decomp;
      for (int m = 0; m < M; ++m) {
        if (mask & (1 << m)) continue;
        int bigger = mask | (1 << m);
        if (fu[static_cast<std::size_t>(bigger)] >
            fu[static_cast<std::size_t>(mask)] + tol)
          ++bad_unprobed;
        if (fp[static_cast<std::size_t>(bigger)] <
            fp[static_cast<std::size_t>(mask)] - tol)
          ++bad_prob;
      }
    }
    // Submodularity: for every S subset of T and m outside T, the marginal
    // gain of adding m to S dominates the gain of adding m to T.
    for (int t = 0; t < masks; ++t) {
      for (int m = 0; m < M; ++m) {
        if (t & (1 << m)) continue;
        double gain_t = fp[static_cast<std::size_t>(t | (1 << m))] -
                        fp[static_cast<std::size_t>(t)];
        for (int s = t;; s = (s - 1) & t) {
          double gain_s = fp[static_cast<std::size_t>(s | (1 << m))] -
                          fp[static_cast<std::size_t>(s)];
          if (gain_s < gain_t - tol) ++bad_submod;
          if (s == 0) break;
        }
      }
    }
  }
  std::ostringstream os;
  os << instances << " instances; violations: decomposition " << bad_decomp
     << ", unprobed-monotone " << bad_unprobed << ", probed-monotone "
     << bad_prob << ", submodularity " << bad_submod;
  return {bad_decomp + bad_unprobed + bad_prob + bad_submod == 0, os.str()};
}

// Criterion 3: the matching solver agrees with brute-force enumeration on
// random rectangular matrices, including negative entries.
Outcome check_matching() {
  const double tol = 1e-9;
  const int cases = 500;
  Rng rng(303);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    int rows = 1 + static_cast<int>(rng.uniform_index(5));
    int cols = 1 + static_cast<int>(rng.uniform_index(5));
    std::vector<std::vector<double>> w(
        static_cast<std::size_t>(rows),
        std::vector<double>(static_cast<std::size_t>(cols)));
    for (auto& row : w)
      for (double& v : row) v = 2.0 * rng.uniform01() - 1.0;
    double got = max_weight_matching(w).value;
    double want = oracle::max_matching_value(w);
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > tol) ++failures;
  }
  std::ostringstream os;
  os << cases << " matrices up to 5x5, max |solver - brute force| = " << worst;
  return {failures == 0, os.str()};
}

// Criterion 4: the slot-based assignment optimizer matches brute-force
// enumeration over all play placements for mixed probed/unprobed/excluded
// arms.
Outcome check_assignment() {
  const double tol = 1e-9;
  const int cases = 200;
  Rng rng(404);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    int M = 1 + static_cast<int>(rng.uniform_index(3));
    int K = 1 + static_cast<int>(rng.uniform_index(3));
    int D = 1 + static_cast<int>(rng.uniform_index(3));
    std::vector<ArmMode> arms;
    std::vector<oracle::OArm> oarms;
    for (int m = 0; m < M; ++m) {
      std::uint64_t kind = rng.uniform_index(3);
      oracle::OArm oa;
      if (kind == 0) {
        arms.push_back(ArmMode::excluded());
        oa.kind = oracle::OArm::Excluded;
      } else if (kind == 1) {
        int n = 1 + static_cast<int>(rng.uniform_index(
                        static_cast<std::uint64_t>(D)));
        std::vector<double> x(static_cast<std::size_t>(K));
        for (double& v : x) v = rng.uniform01();
        oa.kind = oracle::OArm::Probed;
        oa.n = n;
        oa.x = x;
        arms.push_back(ArmMode::probed(n, std::move(x)));
      } else {
        std::vector<double> mu(static_cast<std::size_t>(K));
        for (double& v : mu) v = rng.uniform01();
        std::vector<double> probs(static_cast<std::size_t>(D));
        double sum = 0.0;
        for (double& p : probs) {
          p = 0.05 + rng.uniform01();
          sum += p;
        }
        for (double& p : probs) p /= sum;
        ResourcePmf pmf;
        pmf.probs = probs;
        oa.kind = oracle::OArm::Unprobed;
        oa.mu = mu;
        oa.pmf = probs;
        arms.push_back(ArmMode::unprobed(std::move(mu), std::move(pmf)));
      }
      oarms.push_back(std::move(oa));
    }
    double got = optimal_assignment(arms, K).value;
    double want = oracle::best_profile_value(oarms, K);
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > tol) ++failures;
  }
  std::ostringstream os;
  os << cases << " instances, max |optimizer - enumeration| = " << worst;
  return {failures == 0, os.str()};
}

// Criterion 5: anytime coverage of the mean confidence radius on Bernoulli
// streams — the fraction of streams whose true mean ever escapes below
// mean - radius stays within the configured failure budget.
Outcome check_radius_coverage() {
  const double delta = 0.05;
  const int streams = 10000;
  const int horizon = 100;
  std::vector<double> radius(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (int t = 1; t <= horizon; ++t)
    radius[static_cast<std::size_t>(t)] = confidence_radius(t, delta);
  Rng rng(505);
  int violated = 0;
  for (int s = 0; s < streams; ++s) {
    double sum = 0.0;
    bool bad = false;
    for (int t = 1; t <= horizon; ++t) {
      sum += rng.uniform01() < 0.5 ? 1.0 : 0.0;
      double mean = sum / t;
      if (0.5 - mean >= radius[static_cast<std::size_t>(t)]) {
        bad = true;
        break;
      }
    }
    if (bad) ++violated;
  }
  double frac = static_cast<double>(violated) / streams;
  std::ostringstream os;
  os << "anytime violation fraction " << frac << " over " << streams
     << " Bernoulli(0.5) streams of length " << horizon << " (budget 0.06)";
  return {frac <= 0.06, os.str()};
}

// Criterion 6: empirical-CDF concentration for a fixed five-point
// distribution — the sup-norm deviation exceeds the DKW-style radius in at
// most delta + 0.01 of the trials.
Outcome check_cdf_coverage() {
  const double delta = 0.05;
  const int trials = 10000;
  const int draws = 500;
  const std::vector<double> p = {0.15, 0.30, 0.25, 0.20, 0.10};
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  const double eps = std::sqrt(std::log(2.0 / delta) / (2.0 * draws));
  Rng rng(606);
  int violated = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<int> counts(p.size(), 0);
    for (int d = 0; d < draws; ++d) {
      double u = rng.uniform01();
      double c = 0.0;
      std::size_t idx = p.size() - 1;
      for (std::size_t i = 0; i < p.size(); ++i) {
        c += p[i];
        if (u < c) {
          idx = i;
          break;
        }
      }
      ++counts[idx];
    }
    double sup = 0.0;
    int running = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      running += counts[i];
      double emp = static_cast<double>(running) / draws;
      sup = std::max(sup, std::abs(emp - cdf[i]));
    }
    if (sup > eps) ++violated;
  }
  double frac = static_cast<double>(violated) / trials;
  std::ostringstream os;
  os << "sup-norm violation fraction " << frac << " over " << trials
     << " trials of " << draws << " draws (radius " << eps << ", budget "
     << (delta + 0.01) << ")";
  return {frac <= delta + 0.01, os.str()};
}

// The fixed synthetic configuration for the online checks: one plentiful
// high-variance arm worth probing, two scarce low-mean background arms, and a
// near-free single probe.
Environment online_acceptance_env() {
  using namespace testutil;
  auto bern = [](double mu) { return DiscreteDistribution::bernoulli(mu); };
  return make_env(
      2,
      {pmf({0.2, 0.2, 0.2, 0.2, 0.2}), pmf({0.7, 0.3, 0.0, 0.0, 0.0}),
       pmf({0.5, 0.5, 0.0, 0.0, 0.0})},
      {{bern(0.5), bern(0.5)}, {bern(0.25), bern(0.25)},
       {bern(0.25), bern(0.25)}},
      cost({0.0, 0.02, 1.0}));
}

struct OnlineStats {
  bool ok = false;
  std::string error;
  std::vector<std::string> algos;
  // mean cumulative regret per algo at each checkpoint, algo-major
  std::vector<std::vector<double>> mean_cum;
  std::vector<int> checkpoints;
  int seeds = 0;
  int olpa_le_rr = 0;  // seeds with OLPA cum <= RR cum at the final checkpoint
  // mean positive-part cumulative regret for the first algo (shortfall only)
  std::vector<double> olpa_shortfall;
};

OnlineStats run_online_experiment() {
  OnlineStats stats;
  ExperimentConfig cfg;
  cfg.env = online_acceptance_env();
  cfg.algos = {Policy::Olpa, Policy::NonProbing, Policy::GreedyRandom,
               Policy::RandomRandom};
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  cfg.online.T = 3000;
  cfg.checkpoints = {1000, 2000, 3000};
  cfg.jobs = 0;
  cfg.fingerprint = "acceptance";
  try {
    ExperimentResult res = run_experiment(cfg);
    stats.checkpoints = cfg.checkpoints;
    stats.seeds = static_cast<int>(cfg.seeds.size());
    for (Policy p : cfg.algos) stats.algos.push_back(policy_id(p));
    std::size_t A = cfg.algos.size(), S = cfg.seeds.size();
    stats.mean_cum.assign(A, std::vector<double>(cfg.checkpoints.size(), 0.0));
    for (std::size_t a = 0; a < A; ++a)
      for (std::size_t s = 0; s < S; ++s) {
        const RegretTrace& tr = res.traces[a * S + s];
        for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c)
          stats.mean_cum[a][c] +=
              tr.cum_regret[static_cast<std::size_t>(cfg.checkpoints[c]) - 1] /
              static_cast<double>(S);
      }
    std::size_t rr = 3;  // config order: olpa, nonprobing, gr, rr
    std::size_t last = cfg.checkpoints.size() - 1;
    for (std::size_t s = 0; s < S; ++s) {
      double o = res.traces[0 * S + s]
                     .cum_regret[static_cast<std::size_t>(
                                     cfg.checkpoints[last]) - 1];
      double r = res.traces[rr * S + s]
                     .cum_regret[static_cast<std::size_t>(
                                     cfg.checkpoints[last]) - 1];
      if (o <= r) ++stats.olpa_le_rr;
    }
    stats.olpa_shortfall.assign(cfg.checkpoints.size(), 0.0);
    for (std::size_t s = 0; s < S; ++s) {
      const RegretTrace& tr = res.traces[s];
      double run = 0.0;
      std::size_t c = 0;
      for (std::size_t t = 0; t < tr.round_regret.size(); ++t) {
        run += std::max(tr.round_regret[t], 0.0);
        while (c < cfg.checkpoints.size() &&
               static_cast<std::size_t>(cfg.checkpoints[c]) == t + 1) {
          stats.olpa_shortfall[c] += run / static_cast<double>(S);
          ++c;
        }
      }
    }
    stats.ok = true;
  } catch (const std::exception& e) {
    stats.error = e.what();
  }
  return stats;
}

// Criterion 7: mean cumulative regret ordering at the final checkpoint —
// the full policy beats the no-probing, random-assignment, and fully random
// baselines, and beats the fully random baseline on at least 80% of seeds.
Outcome check_online_ordering(const OnlineStats& st) {
  if (!st.ok) return {false, "experiment failed: " + st.error};
  std::size_t last = st.checkpoints.size() - 1;
  double olpa = st.mean_cum[0][last];
  double nonprobing = st.mean_cum[1][last];
  double gr = st.mean_cum[2][last];
  double rr = st.mean_cum[3][last];
  bool order = olpa < nonprobing && olpa < gr && olpa < rr;
  int need = (st.seeds * 8 + 9) / 10;  // ceil(0.8 * seeds)
  bool per_seed = st.olpa_le_rr >= need;
  std::ostringstream os;
  os << "mean cum regret at t=" << st.checkpoints[last] << ": olpa " << olpa
     << ", nonprobing " << nonprobing << ", gr " << gr << ", rr " << rr
     << "; olpa<=rr on " << st.olpa_le_rr << "/" << st.seeds << " seeds";
  return {order && per_seed, os.str()};
}

// Criterion 8: sublinear-growth indicator — the ratio of the policy's mean
// cumulative regret at the final checkpoint to the first must stay below 3.
Outcome check_online_sublinearity(const OnlineStats& st) {
  if (!st.ok) return {false, "experiment failed: " + st.error};
  double first = st.mean_cum[0][0];
  std::size_t last = st.checkpoints.size() - 1;
  double final_cum = st.mean_cum[0][last];
  double ratio = final_cum / first;
  double short_first = st.olpa_shortfall[0];
  double short_final = st.olpa_shortfall[last];
  double short_ratio = short_first > 0.0 ? short_final / short_first : 1.0;
  std::ostringstream os;
  os << "cum(" << st.checkpoints[last] << ")/cum(" << st.checkpoints[0]
     << ") = " << final_cum << "/" << first << " = " << ratio
     << " (bound < 3); positive-shortfall ratio " << short_ratio;
  return {ratio < 3.0, os.str()};
}

// Criterion 9: running the command-line driver twice with an identical
// configuration produces byte-identical result files.
Outcome check_cli_determinism() {
  namespace fs = std::filesystem;
  std::string cli = PUCS_CLI_PATH;
  fs::path dir = fs::temp_directory_path() / "pucs_acceptance_cli";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  save_environment(online_acceptance_env(), (dir / "env.json").string());
  {
    std::ofstream cfg(dir / "config.json");
    cfg << "{\"T\": 60, \"seeds\": [1, 2], "
        << "\"algos\": \"olpa,nonprobing,gr,rr\", "
        << "\"checkpoints\": [20, 40, 60]}\n";
  }
  auto run = [&](const std::string& out, const std::string& log) {
    std::string cmd = "\"" + cli + "\" online --config " +
                      (dir / "config.json").string() + " --env " +
                      (dir / "env.json").string() + " --out " +
                      (dir / out).string() + " > " + (dir / log).string() +
                      " 2>&1";
    return std::system(cmd.c_str());
  };
  int rc1 = run("out1", "log1.txt");
  int rc2 = run("out2", "log2.txt");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string csv1 = slurp(dir / "out1" / "results.csv");
  std::string csv2 = slurp(dir / "out2" / "results.csv");
  bool pass = rc1 == 0 && rc2 == 0 && !csv1.empty() && csv1 == csv2;
  std::ostringstream os;
  os << "two runs, exit codes " << rc1 << "/" << rc2 << ", " << csv1.size()
     << " bytes vs " << csv2.size() << " bytes, "
     << (csv1 == csv2 ? "identical" : "DIFFERENT");
  return {pass, os.str()};
}

int g_failures = 0;

template <typename Fn>
void report(int id, const std::string& label, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  Outcome out = fn();
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  if (!out.pass) ++g_failures;
  std::printf("criterion %d: %s  %s — %s  [%.1fs]\n", id,
              out.pass ? "PASS" : "FAIL", label.c_str(), out.detail.c_str(),
              secs);
  std::fflush(stdout);
}

}  // namespace

int main() {
  report(1, "offline approximation guarantee", check_offline_guarantee);
  report(2, "expected-value structural properties", check_structural_lemmas);
  report(3, "matching vs brute force", check_matching);
  report(4, "assignment vs enumeration", check_assignment);
  report(5, "mean-radius anytime coverage", check_radius_coverage);
  report(6, "empirical-CDF concentration", check_cdf_coverage);
  OnlineStats st;
  report(7, "online regret ordering", [&] {
    st = run_online_experiment();
    return check_online_ordering(st);
  });
  report(8, "online regret sublinearity",
         [&] { return check_online_sublinearity(st); });
  report(9, "CLI byte-determinism", check_cli_determinism);
  std::printf("acceptance: %d/9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
