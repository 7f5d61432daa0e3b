#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pucs/harness.hpp"
#include "pucs/ingest.hpp"
#include "pucs/log.hpp"
#include "pucs/olpa.hpp"
#include "pucs/probing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Errors that should exit with the usage/config code (2) rather than the
// runtime-failure code (1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string set_str(const std::vector<int>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(s[i]);
  }
  out += "}";
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

pucs::ProbingCost parse_alpha(const std::string& text, int I) {
  if (text == "linear") {
    if (I < 1) throw UsageError("alpha \"linear\" needs a budget I >= 1");
    return pucs::ProbingCost::linear(I);
  }
  pucs::ProbingCost cost;
  for (const std::string& tok : split(text, ',')) {
    try {
      cost.alpha.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError("alpha entry is not a number: '" + tok + "'");
    }
  }
  cost.validate();
  return cost;
}

std::string alpha_from_json(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ',';
      out += fmt(v[i].get<double>());
    }
    return out;
  }
  throw UsageError("config key 'alpha' must be an array or \"linear\"");
}

pucs::RewardModel parse_reward_model(const std::string& name) {
  if (name == "bernoulli") return pucs::RewardModel::Bernoulli;
  if (name == "fourlevel") return pucs::RewardModel::FourLevel;
  throw UsageError("unknown reward model '" + name +
                   "' (expected bernoulli or fourlevel)");
}

pucs::ExpectationMethod parse_method(const std::string& name, int W,
                                     std::uint64_t seed, long long limit) {
  if (name == "exact") return pucs::ExpectationMethod::exact(limit);
  if (name == "mc" || name == "montecarlo")
    return pucs::ExpectationMethod::monte_carlo(W, seed);
  throw UsageError("unknown expectation method '" + name +
                   "' (expected exact or mc)");
}

std::vector<pucs::Policy> parse_algos(const std::string& text) {
  std::vector<pucs::Policy> algos;
  for (const std::string& tok : split(text, ',')) {
    auto p = pucs::policy_from_id(tok);
    if (!p.has_value())
      throw UsageError("unknown algorithm id '" + tok +
                       "' (expected olpa, nonprobing, gr, rr)");
    algos.push_back(*p);
  }
  if (algos.empty()) throw UsageError("empty algorithm list");
  return algos;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
  std::string config_path;
  std::string data;
  int M = 3;
  int K = 2;
  double cell_size = 0.01;
  int d_max_cap = 7;
  std::string reward_model = "bernoulli";
  std::string alpha = "linear";
  int I = 2;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string lat_column = "pickup_latitude";
  std::string lon_column = "pickup_longitude";
  std::string passengers_column = "passenger_count";
};

void apply_ingest_config(const CLI::App* sub, IngestOptions& opt) {
  if (opt.config_path.empty()) return;
  json j = read_config(opt.config_path);
  auto flag = [&](const char* name) { return sub->count(name) > 0; };
  if (j.contains("data") && !flag("--data")) opt.data = j["data"];
  if (j.contains("M") && !flag("--M")) opt.M = j["M"];
  if (j.contains("K") && !flag("--K")) opt.K = j["K"];
  if (j.contains("cell_size") && !flag("--cell-size"))
    opt.cell_size = j["cell_size"];
  if (j.contains("d_max_cap") && !flag("--d-max-cap"))
    opt.d_max_cap = j["d_max_cap"];
  if (j.contains("reward_model") && !flag("--reward-model"))
    opt.reward_model = j["reward_model"];
  if (j.contains("alpha") && !flag("--alpha"))
    opt.alpha = alpha_from_json(j["alpha"]);
  if (j.contains("I") && !flag("--I")) opt.I = j["I"];
  if (j.contains("seed") && !flag("--seed")) opt.seed = j["seed"];
  if (j.contains("out") && !flag("--out")) opt.out_dir = j["out"];
  if (j.contains("lat_column")) opt.lat_column = j["lat_column"];
  if (j.contains("lon_column")) opt.lon_column = j["lon_column"];
  if (j.contains("passengers_column"))
    opt.passengers_column = j["passengers_column"];
}

int run_ingest(const CLI::App* sub, IngestOptions& opt) {
  apply_ingest_config(sub, opt);
  if (opt.data.empty())
    throw UsageError("ingest needs an input CSV (--data or config key 'data')");

  std::ifstream in(opt.data);
  if (!in) throw std::runtime_error("cannot open " + opt.data);
  pucs::ColumnMap columns;
  columns.lat = opt.lat_column;
  columns.lon = opt.lon_column;
  columns.passengers = opt.passengers_column;

  pucs::ParseResult parsed;
  try {
    parsed = pucs::parse_trips(in, columns);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());  // missing column / missing header
  }
  if (parsed.records.empty())
    throw UsageError("no usable rows in " + opt.data);

  auto cells = pucs::build_grid(parsed.records, opt.cell_size, opt.d_max_cap);
  pucs::ProbingCost cost = parse_alpha(opt.alpha, opt.I);
  pucs::Rng rng(opt.seed);
  auto built =
      pucs::build_environment(cells, opt.M, opt.K,
                              parse_reward_model(opt.reward_model), cost, rng);

  fs::create_directories(opt.out_dir);
  fs::path env_path = fs::path(opt.out_dir) / "env.json";
  pucs::save_environment(built.env, env_path.string());

  std::cout << "rows parsed: " << parsed.records.size() << "\n"
            << "rows dropped: " << parsed.dropped << "\n"
            << "grid cells: " << cells.size() << " (top " << opt.M
            << " selected)\n";
  if (built.clamped_rewards > 0)
    std::cout << "reward targets clamped to the bottom level: "
              << built.clamped_rewards << "\n";
  std::cout << "environment written to " << env_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// offline

struct OfflineOptions {
  std::string config_path;
  std::string env_path;
  std::string method = "exact";
  int W = 200;
  std::uint64_t method_seed = 0;
  long long exact_limit = 100000;
  int max_arms = 12;
};

void apply_offline_config(const CLI::App* sub, OfflineOptions& opt) {
  if (opt.config_path.empty()) return;
  json j = read_config(opt.config_path);
  auto flag = [&](const char* name) { return sub->count(name) > 0; };
  if (j.contains("environment") && !flag("--env"))
    opt.env_path = j["environment"];
  if (j.contains("method") && !flag("--method")) opt.method = j["method"];
  if (j.contains("W") && !flag("--W")) opt.W = j["W"];
  if (j.contains("method_seed") && !flag("--method-seed"))
    opt.method_seed = j["method_seed"];
  if (j.contains("exact_limit") && !flag("--exact-limit"))
    opt.exact_limit = j["exact_limit"];
  if (j.contains("max_arms") && !flag("--max-arms"))
    opt.max_arms = j["max_arms"];
}

int run_offline(const CLI::App* sub, OfflineOptions& opt) {
  apply_offline_config(sub, opt);
  if (opt.env_path.empty())
    throw UsageError(
        "offline needs an environment (--env or config key 'environment')");

  pucs::Environment env = pucs::load_environment(opt.env_path);
  pucs::ExpectationMethod method =
      parse_method(opt.method, opt.W, opt.method_seed, opt.exact_limit);

  pucs::ProbePlan greedy = pucs::greedy_probe(env, method);
  pucs::ProbePlan star =
      pucs::exhaustive_optimal_probe(env, method, opt.max_arms);
  double ratio = star.value <= 0.0 ? 1.0 : greedy.value / star.value;

  std::cout << "greedy probing set: " << set_str(greedy.probe_set) << "\n"
            << "greedy value: " << fmt(greedy.value) << "\n"
            << "optimal probing set: " << set_str(star.probe_set) << "\n"
            << "optimal value: " << fmt(star.value) << "\n"
            << "ratio: " << fmt(ratio) << "\n"
            << "guarantee factor: " << fmt(pucs::kZeta) << "\n";

  if (method.kind == pucs::ExpectationMethod::Kind::Exact) {
    bool pass = ratio >= pucs::kZeta - 1e-9;
    std::cout << "guarantee: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  }
  std::cout << "guarantee: not asserted under Monte Carlo evaluation\n";
  return 0;
}

// ---------------------------------------------------------------------------
// online

struct OnlineOptions {
  std::string config_path;
  std::string env_path;
  std::string data;  // alternative environment source: dataset CSV
  IngestOptions ingest;
  std::string algos = "olpa,nonprobing,gr,rr";
  int seed_count = 0;           // --seeds N expands to seeds 1..N
  std::vector<std::uint64_t> seed_list;
  std::uint64_t seed = 1;
  int T = 1000;
  double delta = 0.05;
  int W = 200;
  std::string probe_method = "mc";
  std::string score_method = "exact";
  int score_W = 200;
  std::uint64_t score_seed = 9001;
  long long exact_limit = 100000;
  std::string oracle_method = "exact";
  int oracle_W = 10000;
  std::uint64_t oracle_seed = 77;
  bool clamp_ucb = false;
  double sentinel_scale = 10.0;
  std::vector<int> checkpoints = {1000, 2000, 3000};
  int jobs = 0;
  std::string out_dir = "out";
};

void apply_online_config(const CLI::App* sub, OnlineOptions& opt) {
  if (opt.config_path.empty()) return;
  json j = read_config(opt.config_path);
  auto flag = [&](const char* name) { return sub->count(name) > 0; };
  if (j.contains("environment") && !flag("--env"))
    opt.env_path = j["environment"];
  if (j.contains("data")) opt.data = j["data"];
  if (j.contains("ingest")) {
    const json& g = j["ingest"];
    if (g.contains("M")) opt.ingest.M = g["M"];
    if (g.contains("K")) opt.ingest.K = g["K"];
    if (g.contains("cell_size")) opt.ingest.cell_size = g["cell_size"];
    if (g.contains("d_max_cap")) opt.ingest.d_max_cap = g["d_max_cap"];
    if (g.contains("reward_model"))
      opt.ingest.reward_model = g["reward_model"];
    if (g.contains("alpha")) opt.ingest.alpha = alpha_from_json(g["alpha"]);
    if (g.contains("I")) opt.ingest.I = g["I"];
    if (g.contains("seed")) opt.ingest.seed = g["seed"];
  }
  if (j.contains("algos") && !flag("--algos")) {
    if (j["algos"].is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < j["algos"].size(); ++i) {
        if (i > 0) joined += ',';
        joined += j["algos"][i].get<std::string>();
      }
      opt.algos = joined;
    } else {
      opt.algos = j["algos"];
    }
  }
  if (j.contains("seeds") && !flag("--seeds")) {
    if (j["seeds"].is_array())
      opt.seed_list = j["seeds"].get<std::vector<std::uint64_t>>();
    else
      opt.seed_count = j["seeds"];
  }
  if (j.contains("seed") && !flag("--seed")) opt.seed = j["seed"];
  if (j.contains("T") && !flag("--T")) opt.T = j["T"];
  if (j.contains("delta") && !flag("--delta")) opt.delta = j["delta"];
  if (j.contains("W") && !flag("--W")) opt.W = j["W"];
  if (j.contains("probe_method") && !flag("--probe-method"))
    opt.probe_method = j["probe_method"];
  if (j.contains("score_method") && !flag("--score-method"))
    opt.score_method = j["score_method"];
  if (j.contains("score_W")) opt.score_W = j["score_W"];
  if (j.contains("score_seed")) opt.score_seed = j["score_seed"];
  if (j.contains("exact_limit")) opt.exact_limit = j["exact_limit"];
  if (j.contains("oracle_method")) opt.oracle_method = j["oracle_method"];
  if (j.contains("oracle_W")) opt.oracle_W = j["oracle_W"];
  if (j.contains("oracle_seed")) opt.oracle_seed = j["oracle_seed"];
  if (j.contains("clamp_ucb") && !flag("--clamp-ucb"))
    opt.clamp_ucb = j["clamp_ucb"];
  if (j.contains("sentinel_scale"))
    opt.sentinel_scale = j["sentinel_scale"];
  if (j.contains("checkpoints"))
    opt.checkpoints = j["checkpoints"].get<std::vector<int>>();
  if (j.contains("jobs") && !flag("--jobs")) opt.jobs = j["jobs"];
  if (j.contains("out") && !flag("--out")) opt.out_dir = j["out"];
}

int run_online(const CLI::App* sub, OnlineOptions& opt) {
  apply_online_config(sub, opt);

  pucs::ExperimentConfig cfg;
  if (!opt.env_path.empty()) {
    cfg.env = pucs::load_environment(opt.env_path);
  } else if (!opt.data.empty()) {
    std::ifstream in(opt.data);
    if (!in) throw std::runtime_error("cannot open " + opt.data);
    pucs::ParseResult parsed;
    try {
      parsed = pucs::parse_trips(in);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    auto cells = pucs::build_grid(parsed.records, opt.ingest.cell_size,
                                  opt.ingest.d_max_cap);
    pucs::Rng rng(opt.ingest.seed);
    cfg.env = pucs::build_environment(
                  cells, opt.ingest.M, opt.ingest.K,
                  parse_reward_model(opt.ingest.reward_model),
                  parse_alpha(opt.ingest.alpha, opt.ingest.I), rng)
                  .env;
  } else {
    throw UsageError(
        "online needs an environment (--env / config 'environment', or config "
        "'data' plus 'ingest' parameters)");
  }

  cfg.algos = parse_algos(opt.algos);
  if (!opt.seed_list.empty()) {
    cfg.seeds = opt.seed_list;
  } else if (opt.seed_count > 0) {
    for (int s = 1; s <= opt.seed_count; ++s)
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
  } else {
    cfg.seeds = {opt.seed};
  }
  if (opt.T < 0) throw UsageError("T must be nonnegative");

  cfg.online.T = opt.T;
  cfg.online.delta = opt.delta;
  cfg.online.probe_method =
      parse_method(opt.probe_method, opt.W, 0, opt.exact_limit);
  cfg.online.score_method = parse_method(opt.score_method, opt.score_W,
                                         opt.score_seed, opt.exact_limit);
  cfg.online.score_seed = opt.score_seed;
  cfg.online.clamp_ucb = opt.clamp_ucb;
  cfg.online.sentinel_scale = opt.sentinel_scale;
  cfg.oracle_method = parse_method(opt.oracle_method, opt.oracle_W,
                                   opt.oracle_seed, opt.exact_limit);
  cfg.checkpoints = opt.checkpoints;
  cfg.jobs = opt.jobs;

  pucs::ExperimentResult res = pucs::run_experiment(cfg);

  fs::create_directories(opt.out_dir);
  fs::path csv_path = fs::path(opt.out_dir) / "results.csv";
  fs::path summary_path = fs::path(opt.out_dir) / "summary.txt";
  write_file(csv_path, res.csv);
  write_file(summary_path, res.summary);

  std::cout << "optimal probing set: " << set_str(res.probe_star) << "\n"
            << "optimal value: " << fmt(res.optimal) << "\n"
            << res.summary << "results written to " << csv_path.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Probing-augmented selection simulator: offline probing analysis, "
      "online policy experiments, and taxi-trip environment ingestion"};
  app.require_subcommand(1);

  IngestOptions ing;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "Build an environment JSON from a trip CSV");
  ingest->add_option("--config", ing.config_path,
                     "JSON config file; flags override its keys");
  ingest->add_option("--data", ing.data, "input trip CSV [config: data]");
  ingest->add_option("--M", ing.M, "number of arms (top cells) [config: M]")
      ->capture_default_str();
  ingest->add_option("--K", ing.K, "number of plays (vehicles) [config: K]")
      ->capture_default_str();
  ingest->add_option("--cell-size", ing.cell_size,
                     "grid cell size in degrees [config: cell_size]")
      ->capture_default_str();
  ingest->add_option("--d-max-cap", ing.d_max_cap,
                     "resource-count cap per cell [config: d_max_cap]")
      ->capture_default_str();
  ingest->add_option("--reward-model", ing.reward_model,
                     "bernoulli | fourlevel [config: reward_model]")
      ->capture_default_str();
  ingest->add_option("--alpha", ing.alpha,
                     "probing cost: comma list or \"linear\" [config: alpha]")
      ->capture_default_str();
  ingest->add_option("--I", ing.I,
                     "probing budget for alpha=linear [config: I]")
      ->capture_default_str();
  ingest->add_option("--seed", ing.seed,
                     "vehicle placement seed [config: seed]")
      ->capture_default_str();
  ingest->add_option("--out", ing.out_dir,
                     "output directory for env.json [config: out]")
      ->capture_default_str();
  ingest->footer(
      "Config keys: data, M, K, cell_size, d_max_cap, reward_model, alpha, I,\n"
      "seed, out, lat_column, lon_column, passengers_column (defaults match\n"
      "the flags above; column keys default to pickup_latitude,\n"
      "pickup_longitude, passenger_count).");

  OfflineOptions off;
  CLI::App* offline = app.add_subcommand(
      "offline", "Compare greedy probing against the exhaustive optimum");
  offline->add_option("--config", off.config_path,
                      "JSON config file; flags override its keys");
  offline->add_option("--env", off.env_path,
                      "environment JSON [config: environment]");
  offline->add_option("--method", off.method,
                      "expectation method: exact | mc [config: method]")
      ->capture_default_str();
  offline->add_option("--W", off.W, "Monte Carlo draws [config: W]")
      ->capture_default_str();
  offline->add_option("--method-seed", off.method_seed,
                      "Monte Carlo seed [config: method_seed]")
      ->capture_default_str();
  offline->add_option("--exact-limit", off.exact_limit,
                      "outcome cap for exact expectation [config: exact_limit]")
      ->capture_default_str();
  offline->add_option("--max-arms", off.max_arms,
                      "exhaustive search gate [config: max_arms]")
      ->capture_default_str();
  offline->footer(
      "Config keys: environment, method, W, method_seed, exact_limit,\n"
      "max_arms (defaults match the flags above).");

  OnlineOptions onl;
  CLI::App* online = app.add_subcommand(
      "online", "Run the online policies and emit regret CSV + summary");
  online->add_option("--config", onl.config_path,
                     "JSON config file; flags override its keys");
  online->add_option("--env", onl.env_path,
                     "environment JSON [config: environment]");
  online->add_option("--algos", onl.algos,
                     "comma list of olpa,nonprobing,gr,rr [config: algos]")
      ->capture_default_str();
  online->add_option("--seeds", onl.seed_count,
                     "run seeds 1..N [config: seeds (list or count)]");
  online->add_option("--seed", onl.seed,
                     "single seed when --seeds absent [config: seed]")
      ->capture_default_str();
  online->add_option("--T", onl.T, "rounds per run [config: T]")
      ->capture_default_str();
  online->add_option("--delta", onl.delta,
                     "confidence parameter [config: delta]")
      ->capture_default_str();
  online->add_option("--W", onl.W,
                     "per-round probing search draws [config: W]")
      ->capture_default_str();
  online->add_option("--probe-method", onl.probe_method,
                     "probing search method: mc | exact [config: probe_method]")
      ->capture_default_str();
  online->add_option("--score-method", onl.score_method,
                     "round scoring method: exact | mc [config: score_method]")
      ->capture_default_str();
  online->add_option("--jobs", onl.jobs,
                     "parallel cells, 0 = all cores [config: jobs]")
      ->capture_default_str();
  online->add_option("--out", onl.out_dir,
                     "output directory [config: out]")
      ->capture_default_str();
  online->add_flag("--clamp-ucb", onl.clamp_ucb,
                   "clamp optimistic means to 1 [config: clamp_ucb]");
  online->footer(
      "Config keys: environment, data, ingest{M, K, cell_size, d_max_cap,\n"
      "reward_model, alpha, I, seed}, algos, seeds, seed, T, delta, W,\n"
      "probe_method, score_method, score_W (200), score_seed (9001),\n"
      "exact_limit (100000), oracle_method (exact), oracle_W (10000),\n"
      "oracle_seed (77), clamp_ucb (false), sentinel_scale (10),\n"
      "checkpoints ([1000,2000,3000]), jobs, out (defaults in parentheses\n"
      "or matching the flags above).");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ingest->parsed()) return run_ingest(ingest, ing);
    if (offline->parsed()) return run_offline(offline, off);
    if (online->parsed()) return run_online(online, onl);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
