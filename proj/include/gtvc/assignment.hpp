#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gtvc {

struct Assignment {
  /// row i is matched to column col_of_row[i].
  std::vector<std::size_t> col_of_row;
  double total_cost = 0.0;
};

/// Exact minimum-cost perfect matching on a dense n x n cost matrix
/// (row-major) by shortest augmenting paths with dual potentials. O(n^3).
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

}  // namespace gtvc
