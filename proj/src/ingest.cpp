#include "pucs/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "pucs/log.hpp"

namespace pucs {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

bool parse_int(const std::string& s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error("column '" + name + "' not found in the CSV header");
}

}  // namespace

ParseResult parse_trips(std::istream& in, const ColumnMap& columns) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty input: expected a CSV header row");
  strip_cr(line);
  auto header = split_csv(line);
  std::size_t lat_idx = column_index(header, columns.lat);
  std::size_t lon_idx = column_index(header, columns.lon);
  std::size_t pass_idx = column_index(header, columns.passengers);
  std::size_t need = std::max({lat_idx, lon_idx, pass_idx}) + 1;

  ParseResult res;
  while (std::getline(in, line)) {
    strip_cr(line);
    auto fields = split_csv(line);
    TripRecord rec;
    if (fields.size() < need || !parse_double(fields[lat_idx], rec.pickup_lat) ||
        !parse_double(fields[lon_idx], rec.pickup_lon) ||
        !parse_int(fields[pass_idx], rec.passenger_count) ||
        rec.passenger_count < 1) {
      ++res.dropped;
      continue;
    }
    res.records.push_back(rec);
  }
  PUCS_LOG_INFO("parsed " << res.records.size() << " trips, dropped "
                          << res.dropped);
  return res;
}

std::vector<GridCell> build_grid(const std::vector<TripRecord>& records,
                                 double cell_size, int d_max_cap) {
  if (records.empty())
    throw std::invalid_argument("grid aggregation: no records");
  if (cell_size <= 0.0)
    throw std::invalid_argument("grid aggregation: cell size must be positive");
  if (d_max_cap < 1)
    throw std::invalid_argument("grid aggregation: cap must be at least 1");

  std::map<std::pair<int, int>, std::vector<long long>> counts;
  for (const TripRecord& rec : records) {
    int lat_bin = static_cast<int>(std::floor(rec.pickup_lat / cell_size));
    int lon_bin = static_cast<int>(std::floor(rec.pickup_lon / cell_size));
    auto& buckets = counts[{lat_bin, lon_bin}];
    if (buckets.empty()) buckets.assign(static_cast<std::size_t>(d_max_cap), 0);
    int d = std::min(rec.passenger_count, d_max_cap);
    ++buckets[static_cast<std::size_t>(d - 1)];
  }

  std::vector<GridCell> cells;
  cells.reserve(counts.size());
  for (const auto& [key, buckets] : counts) {
    GridCell cell;
    cell.lat_bin = key.first;
    cell.lon_bin = key.second;
    for (long long c : buckets) cell.count += c;
    cell.pmf.probs.reserve(buckets.size());
    for (long long c : buckets)
      cell.pmf.probs.push_back(static_cast<double>(c) /
                               static_cast<double>(cell.count));
    cell.centroid_lat = (static_cast<double>(cell.lat_bin) + 0.5) * cell_size;
    cell.centroid_lon = (static_cast<double>(cell.lon_bin) + 0.5) * cell_size;
    cells.push_back(std::move(cell));
  }
  std::sort(cells.begin(), cells.end(),
            [](const GridCell& a, const GridCell& b) {
              if (a.count != b.count) return a.count > b.count;
              if (a.lat_bin != b.lat_bin) return a.lat_bin < b.lat_bin;
              return a.lon_bin < b.lon_bin;
            });
  PUCS_LOG_INFO("aggregated " << records.size() << " records into "
                              << cells.size() << " cells");
  return cells;
}

DiscreteDistribution four_level_distribution(double mu, bool* clamped) {
  static const std::vector<double> levels = {0.1, 0.4, 0.7, 1.0};
  if (clamped != nullptr) *clamped = false;
  if (mu > 1.0 + 1e-12)
    throw std::invalid_argument("reward level mixture: mean above 1");
  mu = std::min(mu, 1.0);
  if (mu < levels.front()) {
    if (clamped != nullptr) *clamped = true;
    mu = levels.front();
  }

  std::size_t lo = 0;
  while (lo + 2 < levels.size() && levels[lo + 1] <= mu) ++lo;
  double t = (mu - levels[lo]) / (levels[lo + 1] - levels[lo]);

  DiscreteDistribution dist;
  dist.support = levels;
  dist.probs.assign(levels.size(), 0.0);
  dist.probs[lo] = 1.0 - t;
  dist.probs[lo + 1] = t;
  return dist;
}

BuiltEnvironment build_environment(const std::vector<GridCell>& cells, int M,
                                   int K, RewardModel model,
                                   const ProbingCost& cost, Rng& rng) {
  if (M < 1) throw std::invalid_argument("environment build: need M >= 1");
  if (K < 1) throw std::invalid_argument("environment build: need K >= 1");
  if (static_cast<int>(cells.size()) < M)
    throw std::invalid_argument("environment build: only " +
                                std::to_string(cells.size()) +
                                " cells for M = " + std::to_string(M));

  BuiltEnvironment built;
  double lat_lo = cells[0].centroid_lat, lat_hi = cells[0].centroid_lat;
  double lon_lo = cells[0].centroid_lon, lon_hi = cells[0].centroid_lon;
  for (int m = 1; m < M; ++m) {
    const GridCell& c = cells[static_cast<std::size_t>(m)];
    lat_lo = std::min(lat_lo, c.centroid_lat);
    lat_hi = std::max(lat_hi, c.centroid_lat);
    lon_lo = std::min(lon_lo, c.centroid_lon);
    lon_hi = std::max(lon_hi, c.centroid_lon);
  }

  built.vehicles.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    VehiclePos v;
    v.lat = lat_lo + rng.uniform01() * (lat_hi - lat_lo);
    v.lon = lon_lo + rng.uniform01() * (lon_hi - lon_lo);
    built.vehicles.push_back(v);
  }

  std::vector<std::vector<double>> dist(
      static_cast<std::size_t>(M),
      std::vector<double>(static_cast<std::size_t>(K), 0.0));
  for (int m = 0; m < M; ++m) {
    const GridCell& c = cells[static_cast<std::size_t>(m)];
    for (int k = 0; k < K; ++k) {
      const VehiclePos& v = built.vehicles[static_cast<std::size_t>(k)];
      double d = std::abs(c.centroid_lat - v.lat) +
                 std::abs(c.centroid_lon - v.lon);
      dist[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] = d;
      built.d_maxpair = std::max(built.d_maxpair, d);
    }
  }

  Environment& env = built.env;
  env.M = M;
  env.K = K;
  env.D_max = cells[0].pmf.d_max();
  env.probing_cost = cost;
  env.resource_pmfs.reserve(static_cast<std::size_t>(M));
  env.reward_dists.reserve(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    env.resource_pmfs.push_back(cells[static_cast<std::size_t>(m)].pmf);
    std::vector<DiscreteDistribution> row;
    row.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      double d = dist[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
      double mu = built.d_maxpair == 0.0 ? 1.0 : 1.0 - d / built.d_maxpair;
      if (model == RewardModel::Bernoulli) {
        row.push_back(DiscreteDistribution::bernoulli(mu));
      } else {
        bool clamped = false;
        row.push_back(four_level_distribution(mu, &clamped));
        if (clamped) ++built.clamped_rewards;
      }
    }
    env.reward_dists.push_back(std::move(row));
  }
  env.validate();
  PUCS_LOG_INFO("built environment M=" << M << " K=" << K
                                       << " D_max=" << env.D_max);
  return built;
}

}  // namespace pucs
