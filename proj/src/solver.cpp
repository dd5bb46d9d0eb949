#include "gtvc/solver.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace gtvc {

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) throw std::domain_error("threshold must lie in (0, 1)");
  if (!(step_ratio > 0.0)) throw std::domain_error("step_ratio must be positive");
  if (max_iters < 1) throw std::domain_error("max_iters must be at least 1");
}

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::primal_dual:
      return "primal_dual";
    case SolveMethod::mincut:
      return "mincut";
    case SolveMethod::brute_force:
      return "brute_force";
  }
  return "unknown";
}

namespace {

void check_labels(const NeighborGraph& graph, Labels labels) {
  if (labels.size() != graph.num_nodes()) throw std::invalid_argument("labels do not match the graph");
  for (auto y : labels)
    if (y > 1) throw std::domain_error("labels must be 0 or 1");
}

double fidelity(Labels labels, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - labels[i]);
  return s / static_cast<double>(u.size());
}

/// lambda * 2 / (n^2 eps): multiplies w_ij |u_i - u_j| per undirected edge.
double pair_coefficient(const NeighborGraph& graph, double lambda) {
  const double n = static_cast<double>(graph.num_nodes());
  return 2.0 * lambda / (n * n * graph.eps());
}

}  // namespace

double energy(const NeighborGraph& graph, Labels labels, double lambda, std::span<const double> u) {
  if (u.size() != graph.num_nodes() || labels.size() != graph.num_nodes())
    throw std::invalid_argument("energy: size mismatch");
  return lambda * gtv(graph, u) + fidelity(labels, u);
}

NodeFunction binarize(const NeighborGraph& graph, Labels labels, double lambda, std::span<const double> u,
                      double level) {
  const std::size_t n = graph.num_nodes();
  if (u.size() != n || labels.size() != n) throw std::invalid_argument("binarize: size mismatch");
  const double inv_n = 1.0 / static_cast<double>(n);
  const double coef = pair_coefficient(graph, lambda);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });

  // Sweep thresholds upward starting from the all-ones set; each group of equal
  // values leaves the set together.
  std::vector<std::uint8_t> state(n, 1);
  double current = 0.0;
  for (auto y : labels) current += (1 - y) * inv_n;
  double best = current;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t pos = 0; pos < n;) {
    const double v = u[order[pos]];
    for (; pos < n && u[order[pos]] == v; ++pos) {
      const std::size_t i = order[pos];
      current += labels[i] ? inv_n : -inv_n;
      for (const Neighbor& nb : graph.neighbors(i)) {
        const double c = coef * graph.edges()[nb.edge].weight;
        current += state[nb.node] ? c : -c;
      }
      state[i] = 0;
    }
    if (current < best) {
      best = current;
      best_value = v;
    }
  }

  NodeFunction out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] > best_value ? 1.0 : 0.0;

  NodeFunction at_level(n);
  for (std::size_t i = 0; i < n; ++i) at_level[i] = u[i] > level ? 1.0 : 0.0;
  if (energy(graph, labels, lambda, at_level) < energy(graph, labels, lambda, out)) return at_level;
  return out;
}

OverfitCertificate certify_overfit(const NeighborGraph& graph, double lambda) {
  const double n = static_cast<double>(graph.num_nodes());
  const double factor = 2.0 * lambda / (graph.eps() * n);
  double worst = 0.0;
  for (double deg : graph.degree_sums()) worst = std::max(worst, factor * deg);
  return {worst < 1.0, 1.0 - worst};
}

SolveResult solve_brute_force(const NeighborGraph& graph, Labels labels, double lambda) {
  check_labels(graph, labels);
  const std::size_t n = graph.num_nodes();
  if (n > 20) throw std::domain_error("brute force is limited to n <= 20");
  NodeFunction u(n), best_u(n);
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    // u_0 is the most significant bit, so increasing masks are lexicographic.
    for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>((mask >> (n - 1 - i)) & 1u);
    const double e = energy(graph, labels, lambda, u);
    if (e < best) {
      best = e;
      best_u = u;
    }
  }
  SolveResult r;
  r.u = best_u;
  r.u_binary = best_u;
  r.energy_relaxed = r.energy_binary = best;
  r.method = SolveMethod::brute_force;
  return r;
}

namespace {

using FlowTraits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS,
    boost::property<boost::vertex_color_t, boost::default_color_type,
                    boost::property<boost::vertex_distance_t, long,
                                    boost::property<boost::vertex_predecessor_t, FlowTraits::edge_descriptor>>>,
    boost::property<boost::edge_capacity_t, double,
                    boost::property<boost::edge_residual_capacity_t, double,
                                    boost::property<boost::edge_reverse_t, FlowTraits::edge_descriptor>>>>;

void add_arc_pair(FlowGraph& g, std::size_t a, std::size_t b, double cap_ab, double cap_ba) {
  auto capacity = boost::get(boost::edge_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);
  const auto ab = boost::add_edge(a, b, g).first;
  const auto ba = boost::add_edge(b, a, g).first;
  capacity[ab] = cap_ab;
  capacity[ba] = cap_ba;
  reverse[ab] = ba;
  reverse[ba] = ab;
}

}  // namespace

SolveResult solve_mincut(const NeighborGraph& graph, Labels labels, double lambda) {
  check_labels(graph, labels);
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  const std::size_t n = graph.num_nodes();
  // Capacities are the energy scaled by n: unit terminal links.
  const double pair = pair_coefficient(graph, lambda) * static_cast<double>(n);
  const std::size_t source = n, sink = n + 1;
  FlowGraph g(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i])
      add_arc_pair(g, source, i, 1.0, 0.0);
    else
      add_arc_pair(g, i, sink, 1.0, 0.0);
  }
  if (pair > 0.0)
    for (const Edge& e : graph.edges()) add_arc_pair(g, e.i, e.j, pair * e.weight, pair * e.weight);

  boost::boykov_kolmogorov_max_flow(g, source, sink);

  // Source side of the minimum cut = nodes reachable from the source in the
  // residual network; those take the value 1.
  auto capacity = boost::get(boost::edge_capacity, g);
  auto residual = boost::get(boost::edge_residual_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);
  std::vector<std::uint8_t> reached(n + 2, 0);
  std::deque<std::size_t> queue{source};
  reached[source] = 1;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (auto [it, end] = boost::out_edges(v, g); it != end; ++it) {
      const std::size_t w = boost::target(*it, g);
      const double scale = capacity[*it] + capacity[reverse[*it]];
      if (!reached[w] && residual[*it] > 1e-13 * scale) {
        reached[w] = 1;
        queue.push_back(w);
      }
    }
  }

  SolveResult r;
  r.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.u[i] = reached[i] ? 1.0 : 0.0;
  r.u_binary = r.u;
  r.energy_relaxed = r.energy_binary = energy(graph, labels, lambda, r.u);
  r.method = SolveMethod::mincut;
  return r;
}

namespace {

/// Applies K: forward slot (i->j) gets c w (u_j - u_i), backward slot the negative.
void apply_gradient(const NeighborGraph& graph, double c, std::span<const double> u, EdgeField& out) {
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double g = c * edges[e].weight * (u[edges[e].j] - u[edges[e].i]);
    out.forward[e] = g;
    out.backward[e] = -g;
  }
}

/// K^T = c div.
void apply_divergence(const NeighborGraph& graph, double c, const EdgeField& p, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double flow = c * edges[e].weight * (p.backward[e] - p.forward[e]);
    out[edges[e].i] += flow;
    out[edges[e].j] -= flow;
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Squared operator norm of K by power iteration on K^T K, capped by the
/// Gershgorin bound of the weighted Laplacian it equals.
double operator_norm_sq(const NeighborGraph& graph, double c) {
  const std::size_t n = graph.num_nodes();
  std::vector<double> row(n, 0.0);
  for (const Edge& e : graph.edges()) {
    const double w2 = 2.0 * c * c * e.weight * e.weight;
    row[e.i] += w2;
    row[e.j] += w2;
  }
  const double gershgorin = 2.0 * *std::max_element(row.begin(), row.end());
  if (gershgorin == 0.0) return 0.0;

  std::vector<double> v(n), kv(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(1.0 + 12.9898 * static_cast<double>(i));
  EdgeField p = EdgeField::zeros(graph.num_edges());
  double estimate = 0.0;
  for (int it = 0; it < 30; ++it) {
    const double nv = norm(v);
    if (nv == 0.0) break;
    for (double& x : v) x /= nv;
    apply_gradient(graph, c, v, p);
    apply_divergence(graph, c, p, kv);
    estimate = norm(kv);
    v.swap(kv);
  }
  return std::min(gershgorin, 1.1 * estimate);
}

}  // namespace

SolveResult solve_primal_dual(const NeighborGraph& graph, Labels labels, const SolverConfig& config) {
  config.validate();
  check_labels(graph, labels);
  const std::size_t n = graph.num_nodes();
  const std::size_t m = graph.num_edges();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double c = config.lambda / (static_cast<double>(n) * static_cast<double>(n) * graph.eps());

  NodeFunction u(labels.begin(), labels.end());
  NodeFunction u_prev = u, u_bar = u, kt(n);
  EdgeField p = EdgeField::zeros(m), kp = EdgeField::zeros(m);

  SolveResult r;
  r.method = SolveMethod::primal_dual;
  r.u = u;
  r.energy_relaxed = energy(graph, labels, config.lambda, u);
  r.converged = false;

  const double l2 = operator_norm_sq(graph, c);
  if (l2 == 0.0) {
    // No edges: the labels are optimal.
    r.u_binary = r.u;
    r.energy_binary = r.energy_relaxed;
    r.converged = true;
    return r;
  }
  const double lip = std::sqrt(l2);
  const double tau = std::sqrt(config.step_ratio) / lip;
  const double sigma = 1.0 / (std::sqrt(config.step_ratio) * lip);
  const double shrink = tau * inv_n;

  auto dual_value = [&](const std::vector<double>& g) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += labels[i] ? std::min(g[i], inv_n) : std::min(0.0, g[i] + inv_n);
    return d;
  };

  constexpr int kWindow = 50;
  double window_energy = r.energy_relaxed;
  double best_dual = -std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < config.max_iters) {
    ++it;
    // Dual ascent and projection onto the box.
    apply_gradient(graph, c, u_bar, kp);
    for (std::size_t e = 0; e < m; ++e) {
      p.forward[e] = std::clamp(p.forward[e] + sigma * kp.forward[e], -1.0, 1.0);
      p.backward[e] = std::clamp(p.backward[e] + sigma * kp.backward[e], -1.0, 1.0);
    }
    // Primal descent, l1 prox toward the label, then clip to [0, 1].
    apply_divergence(graph, c, p, kt);
    u_prev.swap(u);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = u_prev[i] - tau * kt[i];
      const double y = labels[i];
      const double shrunk = v > y + shrink ? v - shrink : (v < y - shrink ? v + shrink : y);
      u[i] = std::clamp(shrunk, 0.0, 1.0);
      u_bar[i] = 2.0 * u[i] - u_prev[i];
    }

    if (it % 10 == 0 || it == config.max_iters) {
      const double e = energy(graph, labels, config.lambda, u);
      if (e < r.energy_relaxed) {
        r.energy_relaxed = e;
        r.u = u;
      }
      best_dual = std::max(best_dual, dual_value(kt));
    }
    if (it % kWindow == 0) {
      const double e = energy(graph, labels, config.lambda, u);
      const double scale = std::max(std::abs(e), std::numeric_limits<double>::min());
      const bool flat = std::abs(e - window_energy) <= config.tol * scale;
      const bool tight = r.energy_relaxed - best_dual <= config.tol * std::max(r.energy_relaxed, inv_n);
      window_energy = e;
      if (flat || tight) {
        r.converged = true;
        break;
      }
    }
  }
  r.iters = it;
  r.gap = std::max(0.0, r.energy_relaxed - best_dual);
  r.u_binary = binarize(graph, labels, config.lambda, r.u, config.threshold);
  r.energy_binary = energy(graph, labels, config.lambda, r.u_binary);
  return r;
}

}  // namespace gtvc
