#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gtvc {

/// Uniform bucket grid over a point set (row-major n x d), stored as CSR.
///
/// Cells that would exceed a memory cap are merged by doubling the cell size;
/// range queries remain exact because they scan ceil(radius / cell) cells.
class PointGrid {
 public:
  PointGrid(std::span<const double> points, int dim, double cell_size);

  int dim() const { return dim_; }
  std::size_t size() const { return n_; }
  double cell_size() const { return cell_; }

  /// Calls visit(j) for every point j whose cell intersects the cube of
  /// half-width `radius` around q. Callers filter by exact distance.
  template <typename Visit>
  void for_each_candidate(std::span<const double> q, double radius, Visit&& visit) const {
    std::vector<long> lo(dim_), hi(dim_), idx(dim_);
    for (int k = 0; k < dim_; ++k) {
      lo[k] = clamp_cell(static_cast<long>(std::floor((q[k] - radius - origin_[k]) / cell_)), k);
      hi[k] = clamp_cell(static_cast<long>(std::floor((q[k] + radius - origin_[k]) / cell_)), k);
      if (q[k] + radius < origin_[k] || q[k] - radius > origin_[k] + counts_[k] * cell_) return;
    }
    idx = lo;
    while (true) {
      std::size_t flat = 0;
      for (int k = 0; k < dim_; ++k) flat = flat * counts_[k] + idx[k];
      for (std::size_t s = start_[flat]; s < start_[flat + 1]; ++s) visit(order_[s]);
      int k = dim_ - 1;
      while (k >= 0 && idx[k] == hi[k]) {
        idx[k] = lo[k];
        --k;
      }
      if (k < 0) break;
      ++idx[k];
    }
  }

  /// Index of the nearest point to q; exact distance ties go to the lowest index.
  std::size_t nearest(std::span<const double> q) const;

 private:
  long clamp_cell(long c, int k) const { return c < 0 ? 0 : (c >= counts_[k] ? counts_[k] - 1 : c); }
  double dist2(std::size_t i, std::span<const double> q) const;

  std::span<const double> points_;
  int dim_;
  std::size_t n_;
  double cell_;
  std::vector<double> origin_;
  std::vector<long> counts_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

}  // namespace gtvc
