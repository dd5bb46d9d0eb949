#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtvc/groundtruth.hpp"
#include "gtvc/kernels.hpp"
#include "gtvc/metrics.hpp"
#include "gtvc/solver.hpp"

namespace gtvc {

/// Asymptotic regime of the regularization weight relative to eps.
enum class Regime { overfit, consistent, fixed, underfit };

std::string to_string(Regime regime);
Regime parse_regime(const std::string& text);

/// lambda_n schedule:
///   overfit:    c * eps_n * n^{-exponent}
///   consistent: c * n^{-exponent}
///   fixed:      c
///   underfit:   c * n^{+exponent}
struct LambdaRule {
  Regime regime = Regime::consistent;
  double coefficient = 1.0;
  double exponent = 0.25;

  double at(std::size_t n, double eps) const;
};

struct SweepConfig {
  nlohmann::json model_json;
  std::vector<std::size_t> n_list;
  PowerRule eps_rule{1.0, -1.0 / 3.0};
  std::vector<LambdaRule> lambda_rules;
  KernelProfile kernel = KernelProfile::indicator();
  std::vector<std::uint64_t> seeds{1};
  std::size_t test_m = 20000;
  /// Largest n solved by min-cut; larger runs use the primal-dual solver.
  std::size_t mincut_max_n = 20000;
  SolverConfig primal_dual;
  std::string output_csv = "sweep.csv";
  /// Wall-clock times go here, keeping output_csv reproducible byte for byte.
  std::string timing_csv;
  /// When set, each run's dataset CSV and solution JSON are written here.
  std::string solutions_dir;
  int threads = 1;

  GroundTruthModel model() const;
  void validate() const;
  /// Relative paths in the JSON (model file, outputs) resolve against base_dir.
  static SweepConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
};

inline constexpr int kReportSchemaVersion = 1;

struct RegimeRow {
  Regime regime = Regime::consistent;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double lambda = 0.0;
  SolveMethod method = SolveMethod::mincut;
  double energy = 0.0;
  double gtv_of_solution = 0.0;
  double empirical_risk = 0.0;
  double label_agreement = 0.0;
  bool constant_solution = false;
  double bayes_agreement = 0.0;
  double test_risk = 0.0;
  double test_ci = 0.0;
  double excess_risk = 0.0;
  double tl1_proxy = 0.0;
  bool certified = false;
  double certificate_margin = 0.0;
  std::size_t components = 0;
  std::size_t edges = 0;
  bool converged = true;
  double runtime_ms = 0.0;
};

struct RegimeReport {
  double bayes_risk = 0.0;
  std::vector<RegimeRow> rows;

  std::vector<std::string> regimes() const;
};

struct RunOutput {
  RegimeRow row;
  LabeledCloud cloud;
  SolveResult solution;
};

/// One sample -> graph -> certificate -> solve -> Voronoi -> metrics pass.
/// The cloud uses derive_seed(seed, n); the test sample derive_seed(seed, tag),
/// shared by every n and regime of the same seed.
RunOutput run_single(const GroundTruthModel& model, std::size_t n, const LambdaRule& rule, const SweepConfig& config,
                     std::uint64_t seed);

/// Runs every (regime, n, seed); rows are sorted by (regime, n, seed) and
/// written to config.output_csv.
RegimeReport run_sweep(const SweepConfig& config);

void write_report_csv(const RegimeReport& report, const std::string& path);
RegimeReport read_report_csv(const std::string& path);

/// Solution JSON as written by the CLI `solve` command.
nlohmann::json solution_to_json(const SolveResult& result, double lambda, double eps, const KernelProfile& kernel,
                                const OverfitCertificate& certificate, std::size_t components);
NodeFunction solution_values(const nlohmann::json& j, bool binary = true);

}  // namespace gtvc
