#pragma once

#include <utility>
#include <vector>

namespace pucs {

struct Matching {
  std::vector<std::pair<int, int>> edges;  // (row, col), ascending by row
  double value = 0.0;
};

// Exact maximum-weight bipartite matching on a rectangular matrix.
// Rows may stay unmatched; edges with negative weight are never taken, and
// with nonnegative weights the result has maximum cardinality. Deterministic:
// equal-value optima resolve by a fixed scan order, so identical inputs give
// identical edge lists.
Matching max_weight_matching(const std::vector<std::vector<double>>& weights);

}  // namespace pucs
