#include "pucs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pucs/log.hpp"

namespace pucs {

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

RegretTrace zeta_regret(const std::string& algo, std::uint64_t seed,
                        const std::vector<double>& round_scores,
                        double optimal, const std::string& fingerprint) {
  if (optimal < 0.0)
    throw std::invalid_argument("regret series: optimal value is negative");
  RegretTrace tr;
  tr.algo = algo;
  tr.seed = seed;
  tr.round_scores = round_scores;
  tr.optimal = optimal;
  tr.fingerprint = fingerprint;
  tr.round_regret.reserve(round_scores.size());
  tr.cum_regret.reserve(round_scores.size());
  double target = kZeta * optimal;
  double cum = 0.0;
  for (double score : round_scores) {
    double r = target - score;
    cum += r;
    tr.round_regret.push_back(r);
    tr.cum_regret.push_back(cum);
  }
  return tr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.env.validate();

  ExperimentResult res;
  ProbePlan star = exhaustive_optimal_probe(cfg.env, cfg.oracle_method);
  res.probe_star = star.probe_set;
  res.optimal = star.value;
  PUCS_LOG_INFO("optimal probing set of size " << res.probe_star.size()
                                               << ", value " << res.optimal);

  struct Cell {
    Policy algo;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (Policy a : cfg.algos)
    for (std::uint64_t s : cfg.seeds) cells.push_back({a, s});

  std::vector<std::vector<RoundLog>> logs(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());

  unsigned jobs = cfg.jobs > 0
                      ? static_cast<unsigned>(cfg.jobs)
                      : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(cells.size(), 1));

  auto run_cell = [&](std::size_t i) {
    try {
      logs[i] = run_policy(cells[i].algo, cfg.env, cfg.online, cells[i].seed);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    for (auto& th : workers) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  res.traces.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<double> scores;
    scores.reserve(logs[i].size());
    for (const RoundLog& log : logs[i]) scores.push_back(log.score);
    res.traces.push_back(zeta_regret(policy_id(cells[i].algo), cells[i].seed,
                                     scores, res.optimal, cfg.fingerprint));
  }

  std::string csv =
      "t,algo,seed,round_score,optimal_score,round_regret,cum_regret\n";
  for (const RegretTrace& tr : res.traces) {
    for (std::size_t t = 0; t < tr.round_scores.size(); ++t) {
      csv += std::to_string(t + 1);
      csv += ',';
      csv += tr.algo;
      csv += ',';
      csv += std::to_string(tr.seed);
      csv += ',';
      csv += fmt(tr.round_scores[t]);
      csv += ',';
      csv += fmt(tr.optimal);
      csv += ',';
      csv += fmt(tr.round_regret[t]);
      csv += ',';
      csv += fmt(tr.cum_regret[t]);
      csv += '\n';
    }
  }
  res.csv = std::move(csv);

  std::vector<int> cps;
  for (int c : cfg.checkpoints)
    if (c >= 1 && c <= cfg.online.T) cps.push_back(c);

  std::string summary = "mean cumulative regret by checkpoint\n";
  summary += pad("algo", 12);
  for (int c : cps) summary += pad("t=" + std::to_string(c), 12);
  summary += '\n';
  for (std::size_t a = 0; a < cfg.algos.size(); ++a) {
    summary += pad(policy_id(cfg.algos[a]), 12);
    for (int c : cps) {
      double total = 0.0;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const RegretTrace& tr = res.traces[a * cfg.seeds.size() + s];
        total += tr.cum_regret[static_cast<std::size_t>(c - 1)];
      }
      double mean = cfg.seeds.empty()
                        ? 0.0
                        : total / static_cast<double>(cfg.seeds.size());
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", mean);
      summary += pad(buf, 12);
    }
    summary += '\n';
  }
  res.summary = std::move(summary);
  return res;
}

}  // namespace pucs
