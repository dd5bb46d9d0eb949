#include "gtvc/sweep.hpp"

#include "gtvc/io.hpp"
#include "gtvc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace gtvc {

namespace {

constexpr std::uint64_t kTestSampleTag = 0x7E57;

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::overfit:
      return "overfit";
    case Regime::consistent:
      return "consistent";
    case Regime::fixed:
      return "fixed";
    case Regime::underfit:
      return "underfit";
  }
  return "unknown";
}

Regime parse_regime(const std::string& text) {
  if (text == "overfit") return Regime::overfit;
  if (text == "consistent") return Regime::consistent;
  if (text == "fixed") return Regime::fixed;
  if (text == "underfit") return Regime::underfit;
  throw std::invalid_argument("unknown regime '" + text + "' (expected overfit|consistent|fixed|underfit)");
}

double LambdaRule::at(std::size_t n, double eps) const {
  const double nn = static_cast<double>(n);
  switch (regime) {
    case Regime::overfit:
      return coefficient * eps * std::pow(nn, -exponent);
    case Regime::consistent:
      return coefficient * std::pow(nn, -exponent);
    case Regime::fixed:
      return coefficient;
    case Regime::underfit:
      return coefficient * std::pow(nn, exponent);
  }
  return coefficient;
}

GroundTruthModel SweepConfig::model() const {
  if (model_json.is_string()) {
    const std::string name = model_json.get<std::string>();
    if (name == "builtin:quadrant") return models::quadrant();
    if (name == "builtin:asymmetric_quadrant") return models::asymmetric_quadrant();
    if (name == "builtin:half_plane") return models::half_plane();
    return load_model(name);
  }
  return GroundTruthModel::from_json(model_json);
}

void SweepConfig::validate() const {
  if (n_list.empty()) throw std::domain_error("sweep: n_list is empty");
  if (std::any_of(n_list.begin(), n_list.end(), [](std::size_t n) { return n == 0; }))
    throw std::domain_error("sweep: n must be positive");
  if (!(eps_rule.coefficient > 0.0)) throw std::domain_error("sweep: eps rule must be positive");
  if (lambda_rules.empty()) throw std::domain_error("sweep: no regimes");
  for (const auto& r : lambda_rules)
    if (!(r.coefficient > 0.0) || !std::isfinite(r.exponent)) throw std::domain_error("sweep: lambda rule must be positive");
  if (seeds.empty()) throw std::domain_error("sweep: no seeds");
  if (test_m < 100) throw std::domain_error("sweep: test_m must be at least 100");
  if (threads < 1) throw std::domain_error("sweep: threads must be at least 1");
  kernel.validate();
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
  auto resolve = [&](const std::string& p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
  };
  SweepConfig c;
  try {
    c.model_json = j.at("model");
    if (c.model_json.is_string() && c.model_json.get<std::string>().rfind("builtin:", 0) != 0)
      c.model_json = resolve(c.model_json.get<std::string>());
    c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
    if (j.contains("eps_rule"))
      c.eps_rule = {j["eps_rule"].value("c", 1.0), j["eps_rule"].value("exponent", -1.0 / 3.0)};
    for (const auto& r : j.at("regimes"))
      c.lambda_rules.push_back({parse_regime(r.at("regime").get<std::string>()), r.value("c", 1.0), r.value("exponent", 0.0)});
    c.kernel = parse_kernel(j.value("kernel", std::string("indicator")));
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.test_m = j.value("test_m", c.test_m);
    c.mincut_max_n = j.value("mincut_max_n", c.mincut_max_n);
    if (j.contains("primal_dual")) {
      const auto& pd = j["primal_dual"];
      c.primal_dual.max_iters = pd.value("max_iters", c.primal_dual.max_iters);
      c.primal_dual.tol = pd.value("tol", c.primal_dual.tol);
      c.primal_dual.step_ratio = pd.value("step_ratio", c.primal_dual.step_ratio);
      c.primal_dual.threshold = pd.value("threshold", c.primal_dual.threshold);
    }
    c.output_csv = resolve(j.value("output_csv", c.output_csv));
    c.timing_csv = resolve(j.value("timing_csv", std::string{}));
    c.solutions_dir = resolve(j.value("solutions_dir", std::string{}));
    c.threads = j.value("threads", 1);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<std::string> RegimeReport::regimes() const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    const auto name = to_string(row.regime);
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

nlohmann::json solution_to_json(const SolveResult& result, double lambda, double eps, const KernelProfile& kernel,
                                const OverfitCertificate& certificate, std::size_t components) {
  return {{"method", to_string(result.method)},
          {"lambda", lambda},
          {"eps", eps},
          {"kernel", to_string(kernel)},
          {"kernel_support_radius", kernel.support_radius()},
          {"u", result.u},
          {"u_binary", result.u_binary},
          {"energy_relaxed", result.energy_relaxed},
          {"energy_binary", result.energy_binary},
          {"iterations", result.iters},
          {"gap", result.gap},
          {"converged", result.converged},
          {"certificate", {{"certified", certificate.certified}, {"margin", certificate.margin}}},
          {"components", components}};
}

NodeFunction solution_values(const nlohmann::json& j, bool binary) {
  try {
    return j.at(binary ? "u_binary" : "u").get<NodeFunction>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("solution: ") + e.what());
  }
}

RunOutput run_single(const GroundTruthModel& model, std::size_t n, const LambdaRule& rule, const SweepConfig& config,
                     std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  RegimeRow& row = out.row;
  row.regime = rule.regime;
  row.n = n;
  row.seed = seed;
  row.eps = config.eps_rule.at(n);
  row.lambda = rule.at(n, row.eps);

  out.cloud = sample(model, n, derive_seed(seed, n));
  const NeighborGraph graph = NeighborGraph::build(out.cloud, row.eps, config.kernel);
  const OverfitCertificate cert = certify_overfit(graph, row.lambda);
  if (n <= config.mincut_max_n) {
    out.solution = solve_mincut(graph, out.cloud.labels, row.lambda);
  } else {
    SolverConfig pd = config.primal_dual;
    pd.lambda = row.lambda;
    out.solution = solve_primal_dual(graph, out.cloud.labels, pd);
  }
  const NodeFunction& u = out.solution.u_binary;

  row.method = out.solution.method;
  row.converged = out.solution.converged;
  row.energy = energy(graph, out.cloud.labels, row.lambda, u);
  row.gtv_of_solution = gtv(graph, u);
  row.empirical_risk = empirical_risk(u, out.cloud.labels);
  row.label_agreement = 1.0 - row.empirical_risk;
  row.constant_solution = std::all_of(u.begin(), u.end(), [&](double v) { return v == u.front(); });
  row.certified = cert.certified;
  row.certificate_margin = cert.margin;
  row.components = graph.count_components();
  row.edges = graph.num_edges();

  const VoronoiClassifier classifier = voronoi_extend(out.cloud, u);
  const std::uint64_t test_seed = derive_seed(seed, kTestSampleTag);
  const RiskEstimate risk = test_risk(classifier, model, config.test_m, test_seed);
  row.test_risk = risk.estimate;
  row.test_ci = risk.ci_halfwidth;
  row.excess_risk = risk.estimate - bayes_risk(model);
  row.bayes_agreement = bayes_agreement(classifier, model, config.test_m, test_seed);
  row.tl1_proxy = tl1_proxy_1nn(
      out.cloud, u, model, [&](std::span<const double> x) { return static_cast<double>(bayes_classify(model, x)); },
      config.test_m, test_seed);
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RegimeReport run_sweep(const SweepConfig& config) {
  config.validate();
  const GroundTruthModel model = config.model();

  struct Task {
    std::size_t rule;
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.lambda_rules.size(); ++r)
    for (std::size_t n : config.n_list)
      for (std::uint64_t s : config.seeds) tasks.push_back({r, n, s});

  std::vector<RegimeRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        const Task& t = tasks[k];
        RunOutput run = run_single(model, t.n, config.lambda_rules[t.rule], config, t.seed);
        if (!config.solutions_dir.empty()) {
          const std::string stem = config.solutions_dir + "/" + to_string(run.row.regime) + "_n" + std::to_string(t.n) +
                                   "_s" + std::to_string(t.seed);
          write_cloud_csv(run.cloud, stem + ".csv");
          write_json(solution_to_json(run.solution, run.row.lambda, run.row.eps, config.kernel,
                                      {run.row.certified, run.row.certificate_margin}, run.row.components),
                     stem + ".json");
        }
        rows[k] = run.row;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int workers = std::min<int>(config.threads, static_cast<int>(tasks.size()));
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::stable_sort(rows.begin(), rows.end(), [](const RegimeRow& a, const RegimeRow& b) {
    return std::tie(a.regime, a.n, a.seed) < std::tie(b.regime, b.n, b.seed);
  });
  RegimeReport report{bayes_risk(model), std::move(rows)};
  if (!config.output_csv.empty()) write_report_csv(report, config.output_csv);
  if (!config.timing_csv.empty()) {
    std::ostringstream os;
    os << "regime,n,seed,runtime_ms\n";
    for (const auto& row : report.rows)
      os << to_string(row.regime) << ',' << row.n << ',' << row.seed << ',' << row.runtime_ms << '\n';
    write_text(os.str(), config.timing_csv);
  }
  return report;
}

namespace {

const char* kReportHeader =
    "schema_version,regime,n,seed,eps,lambda,method,energy,gtv_of_solution,empirical_risk,label_agreement,"
    "constant_solution,bayes_agreement,test_risk,test_ci,excess_risk,tl1_proxy,certified,certificate_margin,"
    "components,edges,converged";

}  // namespace

void write_report_csv(const RegimeReport& report, const std::string& path) {
  std::ostringstream os;
  os.precision(17);
  os << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    os << kReportSchemaVersion << ',' << to_string(r.regime) << ',' << r.n << ',' << r.seed << ',' << r.eps << ','
       << r.lambda << ',' << to_string(r.method) << ',' << r.energy << ',' << r.gtv_of_solution << ','
       << r.empirical_risk << ',' << r.label_agreement << ',' << int(r.constant_solution) << ',' << r.bayes_agreement
       << ',' << r.test_risk << ',' << r.test_ci << ',' << r.excess_risk << ',' << r.tl1_proxy << ','
       << int(r.certified) << ',' << r.certificate_margin << ',' << r.components << ',' << r.edges << ','
       << int(r.converged) << '\n';
  }
  write_text(os.str(), path);
}

RegimeReport read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader) throw std::invalid_argument(path + ": not a sweep report");
  RegimeReport report;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream is(line);
    for (std::string field; std::getline(is, field, ',');) f.push_back(field);
    if (f.size() != 22) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": wrong column count");
    try {
      if (std::stoi(f[0]) != kReportSchemaVersion)
        throw std::invalid_argument(path + ": unsupported schema_version " + f[0]);
      RegimeRow r;
      r.regime = parse_regime(f[1]);
      r.n = std::stoull(f[2]);
      r.seed = std::stoull(f[3]);
      r.eps = std::stod(f[4]);
      r.lambda = std::stod(f[5]);
      r.method = f[6] == "primal_dual" ? SolveMethod::primal_dual
                                       : (f[6] == "brute_force" ? SolveMethod::brute_force : SolveMethod::mincut);
      r.energy = std::stod(f[7]);
      r.gtv_of_solution = std::stod(f[8]);
      r.empirical_risk = std::stod(f[9]);
      r.label_agreement = std::stod(f[10]);
      r.constant_solution = f[11] == "1";
      r.bayes_agreement = std::stod(f[12]);
      r.test_risk = std::stod(f[13]);
      r.test_ci = std::stod(f[14]);
      r.excess_risk = std::stod(f[15]);
      r.tl1_proxy = std::stod(f[16]);
      r.certified = f[17] == "1";
      r.certificate_margin = std::stod(f[18]);
      r.components = std::stoull(f[19]);
      r.edges = std::stoull(f[20]);
      r.converged = f[21] == "1";
      report.rows.push_back(r);
    } catch (const std::logic_error& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace gtvc
