#include "gtvc/graph.hpp"

#include "gtvc/io.hpp"
#include "gtvc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace gtvc {

NeighborGraph NeighborGraph::build(std::span<const double> points, int dim, double eps, const KernelProfile& profile) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  if (dim < 1 || points.size() % dim != 0) throw std::domain_error("malformed point array");
  if (points.empty()) throw std::domain_error("cannot build a graph on an empty cloud");
  profile.validate();

  NeighborGraph g;
  g.n_ = points.size() / dim;
  g.dim_ = dim;
  g.eps_ = eps;
  g.kernel_ = profile;

  const double radius = profile.support_radius() * eps;
  const double scale = std::pow(eps, -dim);
  PointGrid grid(points, dim, radius);
  std::vector<std::pair<std::size_t, double>> found;
  for (std::size_t i = 0; i < g.n_; ++i) {
    const std::span<const double> xi = points.subspan(i * dim, dim);
    found.clear();
    grid.for_each_candidate(xi, radius, [&](std::size_t j) {
      if (j <= i) return;
      double sq = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double t = points[j * dim + k] - xi[k];
        sq += t * t;
      }
      const double w = scale * eval(profile, std::sqrt(sq) / eps);
      if (w > 0.0) found.emplace_back(j, w);
    });
    std::sort(found.begin(), found.end());
    for (const auto& [j, w] : found) g.edges_.push_back({i, j, w});
  }
  g.finish();
  return g;
}

NeighborGraph NeighborGraph::build(const LabeledCloud& cloud, double eps, const KernelProfile& profile) {
  cloud.validate();
  return build(cloud.points, cloud.dim, eps, profile);
}

void NeighborGraph::finish() {
  const double self = std::pow(eps_, -dim_) * eval(kernel_, 0.0);
  degree_sums_.assign(n_, self);
  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    degree_sums_[e.i] += e.weight;
    degree_sums_[e.j] += e.weight;
    ++offsets_[e.i + 1];
    ++offsets_[e.j + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[fill[edges_[e].i]++] = {edges_[e].j, e};
    adjacency_[fill[edges_[e].j]++] = {edges_[e].i, e};
  }
}

std::size_t NeighborGraph::count_components() const {
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = n_;
  for (const Edge& e : edges_) {
    const std::size_t a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --components;
    }
  }
  return components;
}

double gtv(const NeighborGraph& graph, std::span<const double> u) {
  if (u.size() != graph.num_nodes()) throw std::domain_error("gtv: function length does not match the graph");
  double sum = 0.0;
  for (const Edge& e : graph.edges()) sum += e.weight * std::abs(u[e.i] - u[e.j]);
  const double n = static_cast<double>(graph.num_nodes());
  return 2.0 * sum / (n * n * graph.eps());
}

NodeFunction divergence(const NeighborGraph& graph, const EdgeField& p) {
  if (p.forward.size() != graph.num_edges() || p.backward.size() != graph.num_edges())
    throw std::domain_error("divergence: edge field does not match the graph");
  NodeFunction div(graph.num_nodes(), 0.0);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double flow = edges[e].weight * (p.backward[e] - p.forward[e]);
    div[edges[e].i] += flow;
    div[edges[e].j] -= flow;
  }
  return div;
}

void write_graph_csv(const NeighborGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.precision(17);
  out << "i,j,weight\n";
  for (const Edge& e : graph.edges()) out << e.i << ',' << e.j << ',' << e.weight << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace gtvc
