#include "gtvc/spatial_grid.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gtvc {

PointGrid::PointGrid(std::span<const double> points, int dim, double cell_size)
    : points_(points), dim_(dim), n_(dim > 0 ? points.size() / dim : 0), cell_(cell_size) {
  if (dim < 1 || points.size() % dim != 0) throw std::domain_error("grid: malformed point array");
  if (n_ == 0) throw std::domain_error("grid: empty point set");
  if (!(cell_size > 0.0)) throw std::domain_error("grid: cell size must be positive");

  origin_.assign(dim_, std::numeric_limits<double>::infinity());
  std::vector<double> top(dim_, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n_; ++i)
    for (int k = 0; k < dim_; ++k) {
      origin_[k] = std::min(origin_[k], points[i * dim_ + k]);
      top[k] = std::max(top[k], points[i * dim_ + k]);
    }

  const double max_cells = std::max<double>(1 << 16, 4.0 * static_cast<double>(n_));
  counts_.assign(dim_, 1);
  while (true) {
    double total = 1.0;
    for (int k = 0; k < dim_; ++k) {
      counts_[k] = static_cast<long>(std::floor((top[k] - origin_[k]) / cell_)) + 1;
      total *= static_cast<double>(counts_[k]);
    }
    if (total <= max_cells) break;
    cell_ *= 2.0;
  }

  std::size_t total = 1;
  for (long c : counts_) total *= static_cast<std::size_t>(c);
  std::vector<std::size_t> cell_of(n_);
  start_.assign(total + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t flat = 0;
    for (int k = 0; k < dim_; ++k)
      flat = flat * counts_[k] + clamp_cell(static_cast<long>(std::floor((points[i * dim_ + k] - origin_[k]) / cell_)), k);
    cell_of[i] = flat;
    ++start_[flat + 1];
  }
  for (std::size_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
  order_.resize(n_);
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) order_[fill[cell_of[i]]++] = i;
}

double PointGrid::dist2(std::size_t i, std::span<const double> q) const {
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double t = points_[i * dim_ + k] - q[k];
    s += t * t;
  }
  return s;
}

std::size_t PointGrid::nearest(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != dim_) throw std::domain_error("grid: query dimension mismatch");
  std::vector<long> center(dim_);
  long max_ring = 0;
  for (int k = 0; k < dim_; ++k) {
    center[k] = static_cast<long>(std::floor((q[k] - origin_[k]) / cell_));
    max_ring = std::max({max_ring, std::abs(center[k]), std::abs(counts_[k] - 1 - center[k])});
  }

  std::size_t best = n_;
  double best_d2 = std::numeric_limits<double>::infinity();
  std::vector<long> idx(dim_), lo(dim_), hi(dim_);
  for (long ring = 0; ring <= max_ring; ++ring) {
    // Cube of Chebyshev radius `ring`, clipped to the grid; visit only its shell.
    bool any = true;
    for (int k = 0; k < dim_; ++k) {
      lo[k] = std::max(0L, center[k] - ring);
      hi[k] = std::min(counts_[k] - 1, center[k] + ring);
      if (lo[k] > hi[k]) any = false;
    }
    if (any) {
      idx = lo;
      while (true) {
        long cheb = 0;
        for (int k = 0; k < dim_; ++k) cheb = std::max(cheb, std::abs(idx[k] - center[k]));
        if (cheb == ring) {
          std::size_t flat = 0;
          for (int k = 0; k < dim_; ++k) flat = flat * counts_[k] + idx[k];
          for (std::size_t s = start_[flat]; s < start_[flat + 1]; ++s) {
            const std::size_t j = order_[s];
            const double d2 = dist2(j, q);
            if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
              best_d2 = d2;
              best = j;
            }
          }
        }
        int k = dim_ - 1;
        while (k >= 0 && idx[k] == hi[k]) {
          idx[k] = lo[k];
          --k;
        }
        if (k < 0) break;
        ++idx[k];
      }
    }
    // Points in rings > ring are at distance >= ring * cell.
    const double bound = static_cast<double>(ring) * cell_;
    if (best < n_ && best_d2 < bound * bound) break;
  }
  return best;
}

}  // namespace gtvc
