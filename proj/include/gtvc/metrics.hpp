#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gtvc/graph.hpp"
#include "gtvc/groundtruth.hpp"
#include "gtvc/kernels.hpp"
#include "gtvc/spatial_grid.hpp"

namespace gtvc {

/// Binary classifier on D.
using Classifier = std::function<int(std::span<const double>)>;
/// Real-valued function on D.
using FieldFunction = std::function<double(std::span<const double>)>;

/// (1/n) sum_i |u_i - y_i|.
double empirical_risk(std::span<const double> u, std::span<const std::uint8_t> labels);

/// 1-NN (Voronoi) extension of a binary node function to all of R^d.
/// Copies share the underlying point index.
class VoronoiClassifier {
 public:
  VoronoiClassifier(std::vector<double> points, int dim, std::vector<std::uint8_t> values);

  int operator()(std::span<const double> x) const;
  std::size_t nearest(std::span<const double> x) const;
  int dim() const { return data_->dim; }
  std::size_t size() const { return data_->values.size(); }

 private:
  struct Data {
    std::vector<double> points;
    int dim;
    std::vector<std::uint8_t> values;
    std::optional<PointGrid> grid;
  };
  std::shared_ptr<const Data> data_;
};

/// Requires u binary. Nearest-neighbor ties go to the lowest point index.
VoronoiClassifier voronoi_extend(const LabeledCloud& cloud, std::span<const double> u);

struct RiskEstimate {
  double estimate = 0.0;
  /// 95% normal-approximation binomial half-width.
  double ci_halfwidth = 0.0;
};

/// Monte-Carlo risk (1/m) sum_k |u(x_k) - y_k| over m >= 100 fresh draws.
RiskEstimate test_risk(const Classifier& classifier, const GroundTruthModel& model, std::size_t m, std::uint64_t seed);

/// Fraction of m >= 100 fresh draws where the classifier matches u_B.
double bayes_agreement(const Classifier& classifier, const GroundTruthModel& model, std::size_t m, std::uint64_t seed);

struct TransportPlanResult {
  /// Point i of the first set goes to point assignment[i] of the second.
  std::vector<std::size_t> assignment;
  /// (1/n) sum of per-pair costs.
  double cost = 0.0;
  /// Largest spatial displacement |x_i - z_assignment[i]|.
  double sup_displacement = 0.0;
};

/// Largest n accepted by the exact assignment solver.
inline constexpr std::size_t kAssignmentBudget = 4096;

/// d_TL1 between (nu_a, f_a) and (nu_b, f_b) for uniform empirical measures of
/// equal size: min over permutations s of (1/n) sum |x_i - z_s(i)| + |f_a(x_i) - f_b(z_s(i))|.
TransportPlanResult tl1_exact(std::span<const double> points_a, std::span<const double> f_a,
                              std::span<const double> points_b, std::span<const double> f_b, int dim);

/// Transport-map proxy: m fresh draws z_k mapped to their nearest cloud point
/// T(z_k); returns (1/m) sum |z_k - T(z_k)| + |u(T(z_k)) - u_ref(z_k)|.
double tl1_proxy_1nn(const LabeledCloud& cloud, std::span<const double> u, const GroundTruthModel& model,
                     const FieldFunction& u_ref, std::size_t m, std::uint64_t seed);

/// grid_res^d points approximating nu: strata are allotted to density cells in
/// proportion to mass, on a regular sub-grid of each cell. seed == 0 places
/// cell centers; other seeds jitter uniformly within each stratum.
std::vector<double> quadrature_points(const GroundTruthModel& model, std::size_t grid_res, std::uint64_t seed);

/// Optimal assignment between the cloud and quadrature_points(model, grid_res,
/// seed) under cost |x - z|; requires grid_res^d == n.
TransportPlanResult transport_sup_diagnostic(const LabeledCloud& cloud, const GroundTruthModel& model,
                                             std::size_t grid_res, std::uint64_t seed);

/// Finite partition of unity {psi_z} on the domain.
class PartitionOfUnity {
 public:
  virtual ~PartitionOfUnity() = default;
  /// Nonzero (index, psi_z(x)) pairs at x.
  virtual void weights(std::span<const double> x, std::vector<std::pair<std::size_t, double>>& out) const = 0;
};

/// Products of 1-D tent functions on a grid of spacing <= `spacing` over the
/// box, normalized pointwise. Each psi_z is supported in a box of half-width
/// `spacing` around its node.
class TentPartition final : public PartitionOfUnity {
 public:
  TentPartition(const Box& box, double spacing);
  void weights(std::span<const double> x, std::vector<std::pair<std::size_t, double>>& out) const override;
  std::size_t size() const;

 private:
  Box box_;
  std::vector<std::size_t> intervals_;
  std::vector<double> step_;
};

/// psi == 1 on the whole domain.
class ConstantPartition final : public PartitionOfUnity {
 public:
  void weights(std::span<const double>, std::vector<std::pair<std::size_t, double>>& out) const override {
    out.assign(1, {0, 1.0});
  }
};

/// sum_z | (1/n) sum_i (mu(x_i) - y_i) psi_z(x_i) |.
double concentration_sum(std::span<const double> points, int dim, std::span<const double> y,
                         const GroundTruthModel& model, const PartitionOfUnity& partition);

/// concentration_sum with tents on a grid of spacing eps / 2.
double concentration_diagnostic(const LabeledCloud& cloud, const GroundTruthModel& model, double eps);

/// Piecewise-flat interface: (d-1)-simplices in R^d (points, segments or
/// triangles), each given by d vertices.
struct Interface {
  int dim = 0;
  /// facet f: d vertices of d coordinates each, flattened.
  std::vector<std::vector<double>> facets;

  static Interface from_json(const nlohmann::json& j);
};

/// Weighted total variation of the indicator whose jump set is the interface:
/// sum over facets of (facet measure) * rho^2. Each facet must lie in a single
/// closed density cell.
double continuum_tv_indicator(const GroundTruthModel& model, const Interface& interface);

/// c * n^exponent.
struct PowerRule {
  double coefficient = 1.0;
  double exponent = 0.0;
  double at(std::size_t n) const { return coefficient * std::pow(static_cast<double>(n), exponent); }
};

struct GammaCheckRow {
  std::size_t n = 0;
  double eps = 0.0;
  double gtv = 0.0;
  double target = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  std::size_t edges = 0;
};

/// For each n: sample a cloud, evaluate GTV_{n,eps_n}(u_B restricted to the
/// cloud) and compare with sigma_eta * TV(u_B). Cloud k uses derive_seed(seed, n).
std::vector<GammaCheckRow> gamma_check(const GroundTruthModel& model, const Interface& bayes_interface,
                                       const KernelProfile& profile, std::span<const std::size_t> n_list,
                                       const PowerRule& eps_rule, std::uint64_t seed);

}  // namespace gtvc
