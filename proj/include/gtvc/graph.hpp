#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gtvc/groundtruth.hpp"
#include "gtvc/kernels.hpp"

namespace gtvc {

/// Real values on the nodes of a graph (u_n in L^1(nu_n)).
using NodeFunction = std::vector<double>;

/// Undirected edge i < j with weight w_ij = eta_eps(x_i - x_j) > 0.
struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;
};

/// Values on ordered node pairs along stored edges: forward[e] = p_ij and
/// backward[e] = p_ji for edge e = (i, j), i < j.
struct EdgeField {
  std::vector<double> forward;
  std::vector<double> backward;

  static EdgeField zeros(std::size_t edges) { return {std::vector<double>(edges, 0.0), std::vector<double>(edges, 0.0)}; }
};

/// Neighbor list entry in the CSR adjacency.
struct Neighbor {
  std::size_t node;
  std::size_t edge;
};

/// eps-neighborhood graph with kernel weights W_ij = eta_eps(x_i - x_j).
class NeighborGraph {
 public:
  static NeighborGraph build(std::span<const double> points, int dim, double eps, const KernelProfile& profile);
  static NeighborGraph build(const LabeledCloud& cloud, double eps, const KernelProfile& profile);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  int dim() const { return dim_; }
  double eps() const { return eps_; }
  const KernelProfile& kernel() const { return kernel_; }

  /// Sorted by (i, j).
  const std::vector<Edge>& edges() const { return edges_; }
  /// sum_j eta_eps(x_i - x_j), including the diagonal term eta_eps(0).
  const std::vector<double>& degree_sums() const { return degree_sums_; }
  std::span<const Neighbor> neighbors(std::size_t i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// Number of connected components.
  std::size_t count_components() const;

 private:
  NeighborGraph() = default;
  void finish();

  std::size_t n_ = 0;
  int dim_ = 0;
  double eps_ = 0.0;
  KernelProfile kernel_;
  std::vector<Edge> edges_;
  std::vector<double> degree_sums_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// GTV_{n,eps}(u) = (1 / (n^2 eps^{d+1})) sum_{i,j} eta((x_i - x_j)/eps) |u_i - u_j|
///               = (2 / (n^2 eps)) sum_{edges} w_ij |u_i - u_j|.
double gtv(const NeighborGraph& graph, std::span<const double> u);

/// div(p)_i = sum_j eta_eps(x_i - x_j) (p_ji - p_ij).
NodeFunction divergence(const NeighborGraph& graph, const EdgeField& p);

/// Writes "i,j,weight" rows.
void write_graph_csv(const NeighborGraph& graph, const std::string& path);

}  // namespace gtvc
