#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gtvc {

/// Axis-aligned box [lo, hi] in R^d.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(std::span<const double> x) const;
  /// Volume of the intersection with another box (0 when disjoint).
  double overlap(const Box& other) const;
};

/// Constant value on one rectangular cell.
struct Cell {
  Box box;
  double value = 0.0;
};

/// Raised when the Bayes classifier has two medians, i.e. nu({u_B = 1}) = 1/2.
class DegenerateMedianError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Ground-truth law of (x, y): piecewise-constant density rho and conditional
/// mean mu = P(y = 1 | x) on rectangular partitions of a box domain.
///
/// Both partitions must tile the domain. rho is bounded away from zero and
/// integrates to one; no mu cell may sit exactly at 1/2.
class GroundTruthModel {
 public:
  GroundTruthModel(Box domain, std::vector<Cell> density_cells, std::vector<Cell> mu_cells, std::string id = {});

  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  const std::vector<Cell>& density_cells() const { return density_; }
  const std::vector<Cell>& mu_cells() const { return mu_; }
  const std::string& id() const { return id_; }

  double density_min() const { return density_min_; }
  double density_max() const { return density_max_; }

  /// rho(x); on shared cell faces the first listed cell wins.
  double density_at(std::span<const double> x) const;
  /// mu(x); on shared cell faces the first listed cell wins.
  double mu_at(std::span<const double> x) const;
  /// True when some closed mu cell containing x has mu >= 1/2.
  bool bayes_label_at(std::span<const double> x) const;

  /// Exact int_D f(mu(x)) rho(x) dx, summed over density/mu cell intersections.
  template <typename F>
  double integrate_mu(F&& f) const {
    double total = 0.0;
    for (const Cell& d : density_)
      for (const Cell& m : mu_) {
        const double v = d.box.overlap(m.box);
        if (v > 0.0) total += f(m.value) * d.value * v;
      }
    return total;
  }

  nlohmann::json to_json() const;
  static GroundTruthModel from_json(const nlohmann::json& j);

 private:
  Box domain_;
  std::vector<Cell> density_;
  std::vector<Cell> mu_;
  std::string id_;
  double density_min_ = 0.0;
  double density_max_ = 0.0;
};

/// n labeled points, row-major n x d.
struct LabeledCloud {
  int dim = 0;
  std::vector<double> points;
  std::vector<std::uint8_t> labels;
  std::uint64_t seed = 0;
  std::string model_id;

  std::size_t size() const { return labels.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  void validate() const;
};

/// n i.i.d. draws from the model; point i uses its own RNG stream (seed, i),
/// so the result is independent of evaluation order.
LabeledCloud sample(const GroundTruthModel& model, std::size_t n, std::uint64_t seed);

/// u_B(x) = 1 iff mu(x) >= 1/2. Throws std::domain_error for x outside D.
int bayes_classify(const GroundTruthModel& model, std::span<const double> x);

/// R(u_B) = int min(mu, 1 - mu) rho dx.
double bayes_risk(const GroundTruthModel& model);

/// nu({u_B = 1}).
double bayes_positive_mass(const GroundTruthModel& model);

/// u_inf: 1 iff nu({u_B = 1}) > 1/2; throws DegenerateMedianError at exactly 1/2.
int median_label(const GroundTruthModel& model);

/// R(c) = int (|c - 1| mu + |c| (1 - mu)) rho dx.
double risk_of_constant(const GroundTruthModel& model, double c);

/// Models used by the experiments and tests. All live on the unit box.
namespace models {
/// mu = hi on the upper-left and lower-right quadrants, lo elsewhere; rho = 1.
GroundTruthModel quadrant(double hi = 0.55, double lo = 0.45);
/// Quadrant layout with rho = 1.2 on the mu = hi quadrants and 0.8 elsewhere,
/// so mu = hi carries 60% of the mass.
GroundTruthModel asymmetric_quadrant(double hi = 0.55, double lo = 0.45);
/// Uniform rho on (0,1)^d with constant mu.
GroundTruthModel constant_mu(double mu, int dim = 2);
/// Uniform rho on (0,1)^2, mu = right for x0 > split, left otherwise.
GroundTruthModel half_plane(double left = 0.1, double right = 0.9, double split = 0.5);
}  // namespace models

}  // namespace gtvc
