#include "pucs/matching.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace pucs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Potentials-based Hungarian algorithm on the minimization form, one
// augmenting row at a time. Runs on a rows x cols cost matrix with
// rows <= cols; returns for each column the matched row (or -1).
std::vector<int> hungarian_min(const std::vector<std::vector<double>>& cost) {
  int n = static_cast<int>(cost.size());
  int m = static_cast<int>(cost.empty() ? 0 : cost[0].size());
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);  // col -> row (1-based)
  std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost[static_cast<std::size_t>(i0) - 1]
                         [static_cast<std::size_t>(j) - 1] -
                     u[static_cast<std::size_t>(i0)] -
                     v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_to_row(static_cast<std::size_t>(m), -1);
  for (int j = 1; j <= m; ++j)
    if (p[static_cast<std::size_t>(j)] != 0)
      col_to_row[static_cast<std::size_t>(j) - 1] =
          p[static_cast<std::size_t>(j)] - 1;
  return col_to_row;
}

}  // namespace

Matching max_weight_matching(const std::vector<std::vector<double>>& weights) {
  Matching result;
  int rows = static_cast<int>(weights.size());
  int cols = rows > 0 ? static_cast<int>(weights[0].size()) : 0;
  if (rows == 0 || cols == 0) return result;

  // Minimize negated weights. One zero-cost dummy column per row lets any
  // row stay unmatched, so negative-weight edges are never forced; the dummy
  // block sits after the real columns, and the strict-inequality scans prefer
  // the earliest column among ties, which keeps zero-weight real edges (and
  // with them maximum cardinality on nonnegative inputs).
  int total_cols = cols + rows;
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(rows),
      std::vector<double>(static_cast<std::size_t>(total_cols), 0.0));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          -weights[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];

  auto col_to_row = hungarian_min(cost);
  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  for (int c = 0; c < cols; ++c)
    if (col_to_row[static_cast<std::size_t>(c)] >= 0)
      row_to_col[static_cast<std::size_t>(col_to_row[static_cast<std::size_t>(c)])] = c;

  // Canonicalize among equal-value optima: repeatedly swap column choices of
  // row pairs when the swap preserves the total weight and lowers the edge
  // list lexicographically. Deterministic and cheap at the sizes used here.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r1 = 0; r1 < rows; ++r1) {
      for (int r2 = r1 + 1; r2 < rows; ++r2) {
        int c1 = row_to_col[static_cast<std::size_t>(r1)];
        int c2 = row_to_col[static_cast<std::size_t>(r2)];
        if (c2 < 0 || (c1 >= 0 && c1 <= c2)) continue;
        double w11 = c1 >= 0 ? weights[static_cast<std::size_t>(r1)]
                                      [static_cast<std::size_t>(c1)]
                             : 0.0;
        double w22 = weights[static_cast<std::size_t>(r2)]
                            [static_cast<std::size_t>(c2)];
        double w12 = weights[static_cast<std::size_t>(r1)]
                            [static_cast<std::size_t>(c2)];
        double w21 = c1 >= 0 ? weights[static_cast<std::size_t>(r2)]
                                      [static_cast<std::size_t>(c1)]
                             : 0.0;
        if (w12 + w21 == w11 + w22) {
          row_to_col[static_cast<std::size_t>(r1)] = c2;
          row_to_col[static_cast<std::size_t>(r2)] = c1;
          changed = true;
        }
      }
    }
  }

  for (int r = 0; r < rows; ++r) {
    int c = row_to_col[static_cast<std::size_t>(r)];
    if (c < 0) continue;
    result.edges.emplace_back(r, c);
    result.value +=
        weights[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return result;
}

}  // namespace pucs
