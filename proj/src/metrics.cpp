#include "gtvc/metrics.hpp"

#include "gtvc/assignment.hpp"
#include "gtvc/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace gtvc {

double empirical_risk(std::span<const double> u, std::span<const std::uint8_t> labels) {
  if (u.size() != labels.size()) throw std::invalid_argument("empirical_risk: size mismatch");
  if (u.empty()) throw std::domain_error("empirical_risk: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::abs(u[i] - labels[i]);
  return s / static_cast<double>(u.size());
}

namespace {

double nn_cell_size(std::span<const double> points, int dim) {
  const std::size_t n = points.size() / dim;
  double extent = 0.0;
  for (int k = 0; k < dim; ++k) {
    double lo = points[k], hi = points[k];
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, points[i * dim + k]);
      hi = std::max(hi, points[i * dim + k]);
    }
    extent = std::max(extent, hi - lo);
  }
  if (extent == 0.0) return 1.0;
  return extent * std::pow(2.0 / static_cast<double>(n), 1.0 / dim);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

VoronoiClassifier::VoronoiClassifier(std::vector<double> points, int dim, std::vector<std::uint8_t> values) {
  if (dim < 1 || points.size() != values.size() * static_cast<std::size_t>(dim))
    throw std::invalid_argument("voronoi: points/values size mismatch");
  if (values.empty()) throw std::domain_error("voronoi: empty cloud");
  for (auto v : values)
    if (v > 1) throw std::domain_error("voronoi: values must be binary");
  auto data = std::make_shared<Data>(Data{std::move(points), dim, std::move(values), std::nullopt});
  data->grid.emplace(data->points, dim, nn_cell_size(data->points, dim));
  data_ = std::move(data);
}

std::size_t VoronoiClassifier::nearest(std::span<const double> x) const { return data_->grid->nearest(x); }

int VoronoiClassifier::operator()(std::span<const double> x) const { return data_->values[nearest(x)]; }

VoronoiClassifier voronoi_extend(const LabeledCloud& cloud, std::span<const double> u) {
  if (u.size() != cloud.size()) throw std::invalid_argument("voronoi: function length does not match the cloud");
  std::vector<std::uint8_t> values(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0 && u[i] != 1.0) throw std::domain_error("voronoi: node function must be binary");
    values[i] = static_cast<std::uint8_t>(u[i]);
  }
  return VoronoiClassifier(cloud.points, cloud.dim, std::move(values));
}

RiskEstimate test_risk(const Classifier& classifier, const GroundTruthModel& model, std::size_t m, std::uint64_t seed) {
  if (m < 100) throw std::domain_error("test_risk needs at least 100 samples");
  const LabeledCloud fresh = sample(model, m, seed);
  std::size_t wrong = 0;
  for (std::size_t k = 0; k < m; ++k) wrong += classifier(fresh.point(k)) != fresh.labels[k];
  const double p = static_cast<double>(wrong) / static_cast<double>(m);
  return {p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(m))};
}

double bayes_agreement(const Classifier& classifier, const GroundTruthModel& model, std::size_t m, std::uint64_t seed) {
  if (m < 100) throw std::domain_error("bayes_agreement needs at least 100 samples");
  const LabeledCloud fresh = sample(model, m, seed);
  std::size_t agree = 0;
  for (std::size_t k = 0; k < m; ++k) agree += classifier(fresh.point(k)) == bayes_classify(model, fresh.point(k));
  return static_cast<double>(agree) / static_cast<double>(m);
}

TransportPlanResult tl1_exact(std::span<const double> points_a, std::span<const double> f_a,
                              std::span<const double> points_b, std::span<const double> f_b, int dim) {
  if (dim < 1) throw std::domain_error("tl1: dimension must be at least 1");
  const std::size_t n = f_a.size();
  if (f_b.size() != n) throw std::domain_error("tl1: point sets must have equal size");
  if (points_a.size() != n * dim || points_b.size() != n * dim) throw std::invalid_argument("tl1: malformed input");
  if (n == 0) throw std::domain_error("tl1: empty point sets");
  if (n > kAssignmentBudget) throw std::domain_error("tl1: n exceeds the assignment budget");

  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i * n + j] = distance(points_a.subspan(i * dim, dim), points_b.subspan(j * dim, dim)) + std::abs(f_a[i] - f_b[j]);
  const Assignment a = solve_assignment(cost, n);
  TransportPlanResult out;
  out.assignment = a.col_of_row;
  out.cost = a.total_cost / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    out.sup_displacement =
        std::max(out.sup_displacement, distance(points_a.subspan(i * dim, dim), points_b.subspan(a.col_of_row[i] * dim, dim)));
  return out;
}

double tl1_proxy_1nn(const LabeledCloud& cloud, std::span<const double> u, const GroundTruthModel& model,
                     const FieldFunction& u_ref, std::size_t m, std::uint64_t seed) {
  if (m < 100) throw std::domain_error("tl1_proxy needs at least 100 samples");
  if (u.size() != cloud.size()) throw std::invalid_argument("tl1_proxy: function length does not match the cloud");
  PointGrid grid(cloud.points, cloud.dim, nn_cell_size(cloud.points, cloud.dim));
  const LabeledCloud fresh = sample(model, m, seed);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const auto z = fresh.point(k);
    const std::size_t t = grid.nearest(z);
    total += distance(z, cloud.point(t)) + std::abs(u[t] - u_ref(z));
  }
  return total / static_cast<double>(m);
}

std::vector<double> quadrature_points(const GroundTruthModel& model, std::size_t grid_res, std::uint64_t seed) {
  const int d = model.dim();
  if (grid_res == 0) throw std::domain_error("grid_res must be positive");
  const std::size_t total = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(grid_res), d)));
  const auto& cells = model.density_cells();

  // Largest-remainder allotment of strata to density cells.
  std::vector<std::size_t> count(cells.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::size_t given = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double share = cells[c].value * cells[c].box.volume() * static_cast<double>(total);
    count[c] = static_cast<std::size_t>(std::floor(share));
    given += count[c];
    remainder.emplace_back(share - std::floor(share), c);
  }
  std::stable_sort(remainder.begin(), remainder.end(), [](auto a, auto b) { return a.first > b.first; });
  for (std::size_t r = 0; given < total; ++r, ++given) ++count[remainder[r % remainder.size()].second];

  std::vector<double> out;
  out.reserve(total * d);
  std::size_t stream = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t k = count[c];
    if (k == 0) continue;
    std::size_t res = 1;
    while (static_cast<double>(std::pow(static_cast<double>(res), d)) < static_cast<double>(k)) ++res;
    const std::size_t strata = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(res), d)));
    const Box& box = cells[c].box;
    for (std::size_t j = 0; j < k; ++j, ++stream) {
      std::size_t s = j * strata / k;
      CounterRng rng(seed, stream);
      std::vector<double> x(d);
      for (int axis = d - 1; axis >= 0; --axis) {
        const std::size_t idx = s % res;
        s /= res;
        const double frac = seed == 0 ? 0.5 : rng.uniform();
        x[axis] = box.lo[axis] + (static_cast<double>(idx) + frac) / static_cast<double>(res) * (box.hi[axis] - box.lo[axis]);
      }
      out.insert(out.end(), x.begin(), x.end());
    }
  }
  return out;
}

TransportPlanResult transport_sup_diagnostic(const LabeledCloud& cloud, const GroundTruthModel& model,
                                             std::size_t grid_res, std::uint64_t seed) {
  if (cloud.dim != model.dim()) throw std::invalid_argument("transport: dimension mismatch");
  const std::vector<double> quad = quadrature_points(model, grid_res, seed);
  if (quad.size() != cloud.points.size()) throw std::domain_error("transport: grid_res^d must equal the cloud size");
  const std::vector<double> zeros(cloud.size(), 0.0);
  return tl1_exact(cloud.points, zeros, quad, zeros, cloud.dim);
}

TentPartition::TentPartition(const Box& box, double spacing) : box_(box) {
  if (!(spacing > 0.0)) throw std::domain_error("tent spacing must be positive");
  for (int k = 0; k < box.dim(); ++k) {
    const double len = box.hi[k] - box.lo[k];
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing - 1e-12)));
    intervals_.push_back(m);
    step_.push_back(len / static_cast<double>(m));
  }
}

std::size_t TentPartition::size() const {
  std::size_t s = 1;
  for (std::size_t m : intervals_) s *= m + 1;
  return s;
}

void TentPartition::weights(std::span<const double> x, std::vector<std::pair<std::size_t, double>>& out) const {
  const int d = box_.dim();
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (int k = 0; k < d; ++k) {
    const double t = std::clamp((x[k] - box_.lo[k]) / step_[k], 0.0, static_cast<double>(intervals_[k]));
    base[k] = std::min(static_cast<std::size_t>(std::floor(t)), intervals_[k] - 1);
    frac[k] = t - static_cast<double>(base[k]);
  }
  out.clear();
  double sum = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    std::size_t flat = 0;
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const bool up = (corner >> k) & 1u;
      flat = flat * (intervals_[k] + 1) + base[k] + (up ? 1 : 0);
      w *= up ? frac[k] : 1.0 - frac[k];
    }
    if (w > 0.0) {
      out.emplace_back(flat, w);
      sum += w;
    }
  }
  for (auto& entry : out) entry.second /= sum;
}

double concentration_sum(std::span<const double> points, int dim, std::span<const double> y,
                         const GroundTruthModel& model, const PartitionOfUnity& partition) {
  const std::size_t n = y.size();
  if (n == 0 || points.size() != n * static_cast<std::size_t>(dim)) throw std::invalid_argument("concentration: size mismatch");
  std::unordered_map<std::size_t, double> acc;
  std::vector<std::pair<std::size_t, double>> w;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = points.subspan(i * dim, dim);
    const double r = model.mu_at(x) - y[i];
    partition.weights(x, w);
    for (const auto& [z, psi] : w) acc[z] += r * psi;
  }
  // Sum in index order so the result does not depend on hash iteration order.
  std::vector<std::pair<std::size_t, double>> sorted(acc.begin(), acc.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (const auto& [z, s] : sorted) total += std::abs(s) / static_cast<double>(n);
  return total;
}

double concentration_diagnostic(const LabeledCloud& cloud, const GroundTruthModel& model, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  const std::vector<double> y(cloud.labels.begin(), cloud.labels.end());
  return concentration_sum(cloud.points, cloud.dim, y, model, TentPartition(model.domain(), 0.5 * eps));
}

Interface Interface::from_json(const nlohmann::json& j) {
  Interface out;
  try {
    out.dim = j.at("dim").get<int>();
    for (const auto& facet : j.at("facets")) {
      std::vector<double> flat;
      for (const auto& vertex : facet) {
        const auto v = vertex.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != out.dim) throw std::domain_error("interface: vertex dimension mismatch");
        flat.insert(flat.end(), v.begin(), v.end());
      }
      if (flat.size() != static_cast<std::size_t>(out.dim * out.dim))
        throw std::domain_error("interface: each facet needs exactly dim vertices");
      out.facets.push_back(std::move(flat));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("interface: ") + e.what());
  }
  return out;
}

namespace {

double facet_measure(const std::vector<double>& f, int dim) {
  switch (dim) {
    case 1:
      return 1.0;
    case 2:
      return std::hypot(f[2] - f[0], f[3] - f[1]);
    case 3: {
      const double a[3] = {f[3] - f[0], f[4] - f[1], f[5] - f[2]};
      const double b[3] = {f[6] - f[0], f[7] - f[1], f[8] - f[2]};
      const double cx = a[1] * b[2] - a[2] * b[1];
      const double cy = a[2] * b[0] - a[0] * b[2];
      const double cz = a[0] * b[1] - a[1] * b[0];
      return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    }
    default:
      throw std::domain_error("interfaces are supported in dimensions 1 to 3");
  }
}

}  // namespace

double continuum_tv_indicator(const GroundTruthModel& model, const Interface& interface) {
  const int d = model.dim();
  if (interface.dim != d && !interface.facets.empty()) throw std::domain_error("interface dimension mismatch");
  double total = 0.0;
  for (const auto& facet : interface.facets) {
    if (facet.size() != static_cast<std::size_t>(d * d)) throw std::domain_error("malformed facet");
    std::vector<double> rho;
    for (const Cell& cell : model.density_cells()) {
      bool inside = true;
      for (int v = 0; v < d && inside; ++v) inside = cell.box.contains(std::span(facet).subspan(v * d, d));
      if (inside) rho.push_back(cell.value);
    }
    if (rho.empty()) throw std::domain_error("interface facet crosses density cells; split it at cell boundaries");
    if (std::any_of(rho.begin(), rho.end(), [&](double r) { return r != rho.front(); }))
      throw std::domain_error("interface facet lies on a density jump; rho is ambiguous there");
    total += facet_measure(facet, d) * rho.front() * rho.front();
  }
  return total;
}

std::vector<GammaCheckRow> gamma_check(const GroundTruthModel& model, const Interface& bayes_interface,
                                       const KernelProfile& profile, std::span<const std::size_t> n_list,
                                       const PowerRule& eps_rule, std::uint64_t seed) {
  const double target = surface_tension(profile, model.dim()) * continuum_tv_indicator(model, bayes_interface);
  std::vector<GammaCheckRow> rows;
  for (std::size_t n : n_list) {
    const LabeledCloud cloud = sample(model, n, derive_seed(seed, n));
    NodeFunction ub(n);
    for (std::size_t i = 0; i < n; ++i) ub[i] = bayes_classify(model, cloud.point(i));
    GammaCheckRow row;
    row.n = n;
    row.eps = eps_rule.at(n);
    const NeighborGraph graph = NeighborGraph::build(cloud, row.eps, profile);
    row.edges = graph.num_edges();
    row.gtv = gtv(graph, ub);
    row.target = target;
    row.abs_error = std::abs(row.gtv - target);
    row.rel_error = target > 0.0 ? row.abs_error / target : row.abs_error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gtvc
