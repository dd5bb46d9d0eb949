#include "gtvc/groundtruth.hpp"

#include "gtvc/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gtvc {

double Box::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= hi[k] - lo[k];
  return v;
}

bool Box::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (int k = 0; k < dim(); ++k)
    if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
  return true;
}

double Box::overlap(const Box& other) const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) {
    const double a = std::max(lo[k], other.lo[k]);
    const double b = std::min(hi[k], other.hi[k]);
    if (b <= a) return 0.0;
    v *= b - a;
  }
  return v;
}

namespace {

void validate_box(const Box& b, const char* what) {
  if (b.lo.empty() || b.lo.size() != b.hi.size()) throw std::domain_error(std::string(what) + ": malformed box");
  for (int k = 0; k < b.dim(); ++k)
    if (!(b.lo[k] < b.hi[k])) throw std::domain_error(std::string(what) + ": box with empty extent");
}

void validate_partition(const Box& domain, const std::vector<Cell>& cells, const char* what) {
  if (cells.empty()) throw std::domain_error(std::string(what) + ": no cells");
  const double tol = 1e-12;
  double covered = 0.0;
  for (const Cell& c : cells) {
    validate_box(c.box, what);
    if (c.box.dim() != domain.dim()) throw std::domain_error(std::string(what) + ": cell dimension mismatch");
    for (int k = 0; k < domain.dim(); ++k)
      if (c.box.lo[k] < domain.lo[k] - tol || c.box.hi[k] > domain.hi[k] + tol)
        throw std::domain_error(std::string(what) + ": cell outside the domain");
    if (!std::isfinite(c.value)) throw std::domain_error(std::string(what) + ": non-finite cell value");
    covered += c.box.volume();
  }
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = a + 1; b < cells.size(); ++b)
      if (cells[a].box.overlap(cells[b].box) > tol * domain.volume())
        throw std::domain_error(std::string(what) + ": overlapping cells");
  if (std::abs(covered - domain.volume()) > 1e-9 * domain.volume())
    throw std::domain_error(std::string(what) + ": cells do not tile the domain");
}

const Cell* find_cell(const std::vector<Cell>& cells, std::span<const double> x) {
  for (const Cell& c : cells)
    if (c.box.contains(x)) return &c;
  return nullptr;
}

}  // namespace

GroundTruthModel::GroundTruthModel(Box domain, std::vector<Cell> density_cells, std::vector<Cell> mu_cells,
                                   std::string id)
    : domain_(std::move(domain)), density_(std::move(density_cells)), mu_(std::move(mu_cells)), id_(std::move(id)) {
  validate_box(domain_, "domain");
  validate_partition(domain_, density_, "density");
  validate_partition(domain_, mu_, "mu");
  double mass = 0.0;
  density_min_ = density_.front().value;
  density_max_ = density_.front().value;
  for (const Cell& c : density_) {
    if (!(c.value > 0.0)) throw std::domain_error("density must be bounded below by a positive constant");
    mass += c.value * c.box.volume();
    density_min_ = std::min(density_min_, c.value);
    density_max_ = std::max(density_max_, c.value);
  }
  if (std::abs(mass - 1.0) > 1e-12) throw std::domain_error("density does not integrate to one");
  for (const Cell& c : mu_) {
    if (c.value < 0.0 || c.value > 1.0) throw std::domain_error("mu must lie in [0, 1]");
    if (c.value == 0.5) throw std::domain_error("mu equals 1/2 on a cell of positive measure");
  }
}

double GroundTruthModel::density_at(std::span<const double> x) const {
  const Cell* c = find_cell(density_, x);
  if (!c) throw std::domain_error("point outside the domain");
  return c->value;
}

double GroundTruthModel::mu_at(std::span<const double> x) const {
  const Cell* c = find_cell(mu_, x);
  if (!c) throw std::domain_error("point outside the domain");
  return c->value;
}

bool GroundTruthModel::bayes_label_at(std::span<const double> x) const {
  bool inside = false;
  for (const Cell& c : mu_) {
    if (!c.box.contains(x)) continue;
    inside = true;
    if (c.value >= 0.5) return true;
  }
  if (!inside) throw std::domain_error("point outside the domain");
  return false;
}

namespace {

nlohmann::json cells_to_json(const std::vector<Cell>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const Cell& c : cells) out.push_back({{"lo", c.box.lo}, {"hi", c.box.hi}, {"value", c.value}});
  return out;
}

std::vector<Cell> cells_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw std::domain_error(std::string("model: missing array '") + key + "'");
  std::vector<Cell> cells;
  for (const auto& c : j.at(key))
    cells.push_back(Cell{Box{c.at("lo").get<std::vector<double>>(), c.at("hi").get<std::vector<double>>()},
                         c.at("value").get<double>()});
  return cells;
}

}  // namespace

nlohmann::json GroundTruthModel::to_json() const {
  return {{"id", id_},
          {"domain", {{"lo", domain_.lo}, {"hi", domain_.hi}}},
          {"density_cells", cells_to_json(density_)},
          {"mu_cells", cells_to_json(mu_)}};
}

GroundTruthModel GroundTruthModel::from_json(const nlohmann::json& j) {
  try {
    Box domain{j.at("domain").at("lo").get<std::vector<double>>(), j.at("domain").at("hi").get<std::vector<double>>()};
    return GroundTruthModel(std::move(domain), cells_from_json(j, "density_cells"), cells_from_json(j, "mu_cells"),
                            j.value("id", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("model: ") + e.what());
  }
}

void LabeledCloud::validate() const {
  if (dim < 1) throw std::domain_error("cloud dimension must be at least 1");
  if (points.size() != labels.size() * static_cast<std::size_t>(dim))
    throw std::domain_error("cloud points/labels size mismatch");
  for (auto y : labels)
    if (y > 1) throw std::domain_error("labels must be 0 or 1");
}

LabeledCloud sample(const GroundTruthModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::domain_error("sample size must be positive");
  const int d = model.dim();
  const auto& cells = model.density_cells();
  std::vector<double> cumulative;
  cumulative.reserve(cells.size());
  double acc = 0.0;
  for (const Cell& c : cells) {
    acc += c.value * c.box.volume();
    cumulative.push_back(acc);
  }

  LabeledCloud cloud;
  cloud.dim = d;
  cloud.seed = seed;
  cloud.model_id = model.id();
  cloud.points.resize(n * d);
  cloud.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const double pick = rng.uniform() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const Cell& cell = cells[std::min<std::size_t>(it - cumulative.begin(), cells.size() - 1)];
    double* x = cloud.points.data() + i * d;
    for (int k = 0; k < d; ++k) x[k] = cell.box.lo[k] + rng.uniform() * (cell.box.hi[k] - cell.box.lo[k]);
    cloud.labels[i] = rng.uniform() < model.mu_at({x, static_cast<std::size_t>(d)}) ? 1 : 0;
  }
  return cloud;
}

int bayes_classify(const GroundTruthModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dim()) throw std::domain_error("point dimension mismatch");
  return model.bayes_label_at(x) ? 1 : 0;
}

double bayes_risk(const GroundTruthModel& model) {
  return model.integrate_mu([](double mu) { return std::min(mu, 1.0 - mu); });
}

double bayes_positive_mass(const GroundTruthModel& model) {
  return model.integrate_mu([](double mu) { return mu >= 0.5 ? 1.0 : 0.0; });
}

int median_label(const GroundTruthModel& model) {
  const double mass = bayes_positive_mass(model);
  if (std::abs(mass - 0.5) <= 1e-12) throw DegenerateMedianError("Bayes classifier has a degenerate median (mass 1/2)");
  return mass > 0.5 ? 1 : 0;
}

double risk_of_constant(const GroundTruthModel& model, double c) {
  return model.integrate_mu([c](double mu) { return std::abs(c - 1.0) * mu + std::abs(c) * (1.0 - mu); });
}

namespace models {

namespace {

Box unit_box(int dim) { return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)}; }

Box quad(double x0, double x1, double y0, double y1) { return Box{{x0, y0}, {x1, y1}}; }

}  // namespace

GroundTruthModel quadrant(double hi, double lo) {
  std::vector<Cell> mu{{quad(0, 0.5, 0.5, 1), hi}, {quad(0.5, 1, 0, 0.5), hi},
                       {quad(0.5, 1, 0.5, 1), lo}, {quad(0, 0.5, 0, 0.5), lo}};
  return GroundTruthModel(unit_box(2), {{unit_box(2), 1.0}}, std::move(mu), "quadrant");
}

GroundTruthModel asymmetric_quadrant(double hi, double lo) {
  std::vector<Cell> rho{{quad(0, 0.5, 0.5, 1), 1.2}, {quad(0.5, 1, 0, 0.5), 1.2},
                        {quad(0.5, 1, 0.5, 1), 0.8}, {quad(0, 0.5, 0, 0.5), 0.8}};
  std::vector<Cell> mu{{quad(0, 0.5, 0.5, 1), hi}, {quad(0.5, 1, 0, 0.5), hi},
                       {quad(0.5, 1, 0.5, 1), lo}, {quad(0, 0.5, 0, 0.5), lo}};
  return GroundTruthModel(unit_box(2), std::move(rho), std::move(mu), "asymmetric_quadrant");
}

GroundTruthModel constant_mu(double mu, int dim) {
  return GroundTruthModel(unit_box(dim), {{unit_box(dim), 1.0}}, {{unit_box(dim), mu}}, "constant_mu");
}

GroundTruthModel half_plane(double left, double right, double split) {
  std::vector<Cell> mu{{quad(0, split, 0, 1), left}, {quad(split, 1, 0, 1), right}};
  return GroundTruthModel(unit_box(2), {{unit_box(2), 1.0}}, std::move(mu), "half_plane");
}

}  // namespace models

}  // namespace gtvc
