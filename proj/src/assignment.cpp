#include "gtvc/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace gtvc {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw std::invalid_argument("assignment: cost matrix is not n x n");
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based; column 0 is the virtual root of each augmenting search.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0), min_slack(n + 1);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t r = row_of_col[col0];
      double delta = inf;
      std::size_t next = 0;
      const double* crow = cost.data() + (r - 1) * n;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double slack = crow[col - 1] - row_pot[r] - col_pot[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          next = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          row_pot[row_of_col[col]] += delta;
          col_pot[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = next;
    } while (row_of_col[col0] != 0);
    do {
      const std::size_t prev = way[col0];
      row_of_col[col0] = row_of_col[prev];
      col0 = prev;
    } while (col0 != 0);
  }

  Assignment out;
  out.col_of_row.assign(n, 0);
  for (std::size_t col = 1; col <= n; ++col) out.col_of_row[row_of_col[col] - 1] = col - 1;
  for (std::size_t i = 0; i < n; ++i) out.total_cost += cost[i * n + out.col_of_row[i]];
  return out;
}

}  // namespace gtvc
