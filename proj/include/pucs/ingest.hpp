#pragma once

#include <istream>
#include <string>
#include <vector>

#include "pucs/environment.hpp"
#include "pucs/rng.hpp"

namespace pucs {

// One taxi trip row reduced to the fields the pipeline uses.
struct TripRecord {
  double pickup_lat = 0.0;
  double pickup_lon = 0.0;
  int passenger_count = 0;
};

// Header names identifying the mapped CSV columns.
struct ColumnMap {
  std::string lat = "pickup_latitude";
  std::string lon = "pickup_longitude";
  std::string passengers = "passenger_count";
};

struct ParseResult {
  std::vector<TripRecord> records;
  long long dropped = 0;  // rows with unparseable fields or passengers < 1
};

// Parses a header-bearing CSV stream. Throws std::runtime_error naming the
// column when a mapped column is missing from the header.
ParseResult parse_trips(std::istream& in, const ColumnMap& columns = {});

// A 0.01-degree grid cell with its empirical passenger-count PMF.
struct GridCell {
  int lat_bin = 0;  // floor(lat / cell_size)
  int lon_bin = 0;
  long long count = 0;            // records aggregated into this cell
  ResourcePmf pmf;                // over {1..d_max_cap}, counts clamped
  double centroid_lat = 0.0;      // (lat_bin + 0.5) * cell_size
  double centroid_lon = 0.0;
};

// Aggregates records into cells keyed by floor(coord / cell_size); passenger
// counts above d_max_cap are clamped into the top bucket. Cells are returned
// sorted by count descending, ties by (lat_bin, lon_bin) ascending. Throws
// std::invalid_argument on empty input.
std::vector<GridCell> build_grid(const std::vector<TripRecord>& records,
                                 double cell_size = 0.01, int d_max_cap = 7);

enum class RewardModel { Bernoulli, FourLevel };

// Discrete distribution on support (0.1, 0.4, 0.7, 1.0) whose mean equals mu:
// a two-point mixture between the adjacent levels bracketing mu, every other
// level zero. Targets below 0.1 clamp to a point mass at 0.1; *clamped is set
// when provided. Throws std::invalid_argument when mu > 1 + 1e-12.
DiscreteDistribution four_level_distribution(double mu,
                                             bool* clamped = nullptr);

struct VehiclePos {
  double lat = 0.0;
  double lon = 0.0;
};

struct BuiltEnvironment {
  Environment env;
  std::vector<VehiclePos> vehicles;  // fixed for the whole experiment
  double d_maxpair = 0.0;            // normalizing Manhattan distance
  int clamped_rewards = 0;           // FourLevel targets clamped up to 0.1
};

// Builds an environment from the top-M cells (the input is expected in
// build_grid order): arm m = cell m with its passenger PMF; vehicle k is
// drawn uniformly from the bounding box of the selected cells; mean rewards
// are mu = 1 - d/d_maxpair with d the Manhattan distance in grid coordinates
// between cell centroid and vehicle. Throws std::invalid_argument when fewer
// than M cells are available.
BuiltEnvironment build_environment(const std::vector<GridCell>& cells, int M,
                                   int K, RewardModel model,
                                   const ProbingCost& cost, Rng& rng);

}  // namespace pucs
