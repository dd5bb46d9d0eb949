// Command-line driver: data generation, solving, certificates, sweeps,
// transport distances and plots.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "gtvc/graph.hpp"
#include "gtvc/io.hpp"
#include "gtvc/kernels.hpp"
#include "gtvc/metrics.hpp"
#include "gtvc/plots.hpp"
#include "gtvc/solver.hpp"
#include "gtvc/sweep.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::string out_dir;
  int threads = 1;
};

gtvc::GroundTruthModel model_from_arg(const std::string& arg) {
  if (arg == "builtin:quadrant") return gtvc::models::quadrant();
  if (arg == "builtin:asymmetric_quadrant") return gtvc::models::asymmetric_quadrant();
  if (arg == "builtin:half_plane") return gtvc::models::half_plane();
  return gtvc::load_model(arg);
}

std::string in_out_dir(const Globals& g, const std::string& path) {
  if (g.out_dir.empty() || path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(g.out_dir) / path).string();
}

/// Prints to stdout, or writes to `path` when it is non-empty.
void emit(const json& j, const Globals& g, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    gtvc::write_json(j, in_out_dir(g, path));
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || v < 1 || v != std::floor(v)) throw std::invalid_argument("bad n value '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty n list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph total variation classification on point clouds"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for relative output paths");
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a labeled dataset from a ground-truth model");
  std::string gen_model, gen_out = "data.csv";
  std::size_t gen_n = 1000;
  gen->add_option("--model", gen_model, "Model JSON or builtin:quadrant|builtin:asymmetric_quadrant|builtin:half_plane")
      ->required();
  gen->add_option("--n", gen_n, "Number of samples")->required();
  gen->add_option("--out", gen_out, "Output CSV")->capture_default_str();

  // solve / certify
  std::string data_path, kernel_text = "indicator", method = "mincut", solve_out, graph_dump;
  double eps = 0.0, lambda = 0.0;
  gtvc::SolverConfig pd;
  auto* solve = app.add_subcommand("solve", "Minimize the regularized empirical risk on a dataset");
  solve->add_option("--data", data_path, "Dataset CSV")->required();
  solve->add_option("--eps", eps, "Graph length scale")->required();
  solve->add_option("--lambda", lambda, "Regularization weight")->required();
  solve->add_option("--kernel", kernel_text, "indicator|exp|gauss[:scale=..][:amp=..][:cutoff=..]")->capture_default_str();
  solve->add_option("--method", method, "pd|mincut")->check(CLI::IsMember({"pd", "mincut"}))->capture_default_str();
  solve->add_option("--out", solve_out, "Output JSON (stdout when omitted)");
  solve->add_option("--max-iters", pd.max_iters, "Primal-dual iteration cap")->capture_default_str();
  solve->add_option("--tol", pd.tol, "Primal-dual stopping tolerance")->capture_default_str();
  solve->add_option("--step-ratio", pd.step_ratio, "Primal/dual step balance")->capture_default_str();
  solve->add_option("--graph-dump", graph_dump, "Write the graph as CSV i,j,weight");

  auto* certify = app.add_subcommand("certify", "Check the overfitting certificate");
  certify->add_option("--data", data_path, "Dataset CSV")->required();
  certify->add_option("--eps", eps, "Graph length scale")->required();
  certify->add_option("--lambda", lambda, "Regularization weight")->required();
  certify->add_option("--kernel", kernel_text, "Kernel")->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a regime sweep from a JSON config");
  std::string sweep_config;
  sweep->add_option("--config", sweep_config, "Sweep config JSON")->required();

  // tl1
  auto* tl1 = app.add_subcommand("tl1", "Exact TL1 distance between two equal-size datasets");
  std::string tl1_a, tl1_b;
  tl1->add_option("--a", tl1_a, "First CSV (x0..,y)")->required();
  tl1->add_option("--b", tl1_b, "Second CSV (x0..,y)")->required();

  // sigma
  auto* sigma = app.add_subcommand("sigma", "Surface tension of a kernel");
  int sigma_dim = 2;
  sigma->add_option("--kernel", kernel_text, "Kernel")->capture_default_str();
  sigma->add_option("--dim", sigma_dim, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();

  // gamma-check
  auto* gamma = app.add_subcommand("gamma-check", "Compare GTV of u_B on samples with sigma * TV(u_B)");
  std::string gamma_model, gamma_interface, gamma_n = "1000,4000,16000", gamma_out;
  double eps_c = 1.0, eps_exponent = -0.25;
  gamma->add_option("--model", gamma_model, "Model JSON or builtin name")->required();
  gamma->add_option("--interface", gamma_interface, "Interface JSON of u_B")->required();
  gamma->add_option("--kernel", kernel_text, "Kernel")->capture_default_str();
  gamma->add_option("--n-list", gamma_n, "Comma-separated sample sizes")->capture_default_str();
  gamma->add_option("--eps-c", eps_c, "eps = c * n^exponent")->capture_default_str();
  gamma->add_option("--eps-exponent", eps_exponent, "eps = c * n^exponent")->capture_default_str();
  gamma->add_option("--out", gamma_out, "Output JSON (stdout when omitted)");

  // plot
  auto* plot = app.add_subcommand("plot", "Emit SVG plots from a sweep report");
  std::string plot_report, plot_data, plot_solution;
  std::vector<std::string> plot_regimes;
  plot->add_option("--report", plot_report, "Sweep report CSV")->required();
  plot->add_option("--regime", plot_regimes, "Regimes to include (repeatable)");
  plot->add_option("--data", plot_data, "Dataset CSV for scatter plots");
  plot->add_option("--solution", plot_solution, "Solution JSON for the u* scatter");

  // risk
  auto* risk = app.add_subcommand("risk", "Empirical and test risk of a solution");
  std::string risk_model, risk_out;
  std::size_t test_m = 20000;
  risk->add_option("--data", data_path, "Dataset CSV")->required();
  risk->add_option("--model", risk_model, "Model JSON or builtin name")->required();
  risk->add_option("--solution", plot_solution, "Solution JSON")->required();
  risk->add_option("--test-m", test_m, "Fresh test samples")->capture_default_str();
  risk->add_option("--out", risk_out, "Output JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*gen) {
      auto cloud = gtvc::sample(model_from_arg(gen_model), gen_n, g.seed);
      gtvc::write_cloud_csv(cloud, in_out_dir(g, gen_out));
      std::cout << json{{"out", in_out_dir(g, gen_out)}, {"n", gen_n}, {"seed", g.seed}}.dump() << '\n';
    } else if (*solve) {
      const auto cloud = gtvc::read_cloud_csv(data_path);
      const auto kernel = gtvc::parse_kernel(kernel_text);
      const auto graph = gtvc::NeighborGraph::build(cloud, eps, kernel);
      if (!graph_dump.empty()) gtvc::write_graph_csv(graph, in_out_dir(g, graph_dump));
      const auto cert = gtvc::certify_overfit(graph, lambda);
      gtvc::SolveResult result;
      if (method == "pd") {
        pd.lambda = lambda;
        result = gtvc::solve_primal_dual(graph, cloud.labels, pd);
      } else {
        result = gtvc::solve_mincut(graph, cloud.labels, lambda);
      }
      emit(gtvc::solution_to_json(result, lambda, eps, kernel, cert, graph.count_components()), g, solve_out);
    } else if (*certify) {
      const auto cloud = gtvc::read_cloud_csv(data_path);
      const auto graph = gtvc::NeighborGraph::build(cloud, eps, gtvc::parse_kernel(kernel_text));
      const auto cert = gtvc::certify_overfit(graph, lambda);
      emit({{"certified", cert.certified}, {"margin", cert.margin}, {"components", graph.count_components()}}, g, {});
    } else if (*sweep) {
      auto config = gtvc::SweepConfig::from_json(gtvc::read_json(sweep_config),
                                                 fs::path(sweep_config).parent_path().string());
      if (app.count("--threads")) config.threads = g.threads;
      if (!g.out_dir.empty()) {
        auto relocate = [&](std::string& p) {
          if (!p.empty()) p = (fs::path(g.out_dir) / fs::path(p).filename()).string();
        };
        relocate(config.output_csv);
        relocate(config.timing_csv);
        relocate(config.solutions_dir);
      }
      const auto report = gtvc::run_sweep(config);
      std::cout << json{{"rows", report.rows.size()}, {"report", config.output_csv}, {"bayes_risk", report.bayes_risk}}.dump()
                << '\n';
    } else if (*tl1) {
      const auto a = gtvc::read_point_table(tl1_a);
      const auto b = gtvc::read_point_table(tl1_b);
      if (a.dim != b.dim) throw std::invalid_argument("tl1: datasets have different dimensions");
      const auto plan = gtvc::tl1_exact(a.points, a.values, b.points, b.values, a.dim);
      emit({{"n", a.size()}, {"distance", plan.cost}, {"sup_displacement", plan.sup_displacement},
            {"assignment", plan.assignment}},
           g, {});
    } else if (*sigma) {
      const auto kernel = gtvc::parse_kernel(kernel_text);
      emit({{"kernel", gtvc::to_string(kernel)},
            {"dim", sigma_dim},
            {"sigma", gtvc::surface_tension(kernel, sigma_dim)},
            {"sigma_quadrature", gtvc::surface_tension_quadrature(kernel, sigma_dim)}},
           g, {});
    } else if (*gamma) {
      const auto model = model_from_arg(gamma_model);
      const auto iface = gtvc::Interface::from_json(gtvc::read_json(gamma_interface));
      const auto n_list = parse_n_list(gamma_n);
      const auto rows = gtvc::gamma_check(model, iface, gtvc::parse_kernel(kernel_text), n_list,
                                          {eps_c, eps_exponent}, g.seed);
      json out = json::array();
      for (const auto& r : rows)
        out.push_back({{"n", r.n}, {"eps", r.eps}, {"gtv", r.gtv}, {"target", r.target}, {"abs_error", r.abs_error},
                       {"rel_error", r.rel_error}, {"edges", r.edges}});
      emit(out, g, gamma_out);
    } else if (*plot) {
      const std::string dir = g.out_dir.empty() ? "." : g.out_dir;
      json written = json::array();
      for (const auto& p : gtvc::emit_plots(gtvc::read_report_csv(plot_report), dir, plot_regimes)) written.push_back(p);
      if (!plot_data.empty()) {
        const auto cloud = gtvc::read_cloud_csv(plot_data);
        const std::vector<double> labels(cloud.labels.begin(), cloud.labels.end());
        gtvc::emit_scatter(cloud, labels, "Samples colored by label", dir + "/samples.svg");
        written.push_back(dir + "/samples.svg");
        if (!plot_solution.empty()) {
          const auto u = gtvc::solution_values(gtvc::read_json(plot_solution), false);
          gtvc::emit_scatter(cloud, u, "Minimizer u*", dir + "/solution.svg");
          written.push_back(dir + "/solution.svg");
        }
      }
      std::cout << json{{"written", written}}.dump() << '\n';
    } else if (*risk) {
      const auto model = model_from_arg(risk_model);
      const auto cloud = gtvc::read_cloud_csv(data_path);
      const auto u = gtvc::solution_values(gtvc::read_json(plot_solution), true);
      const auto classifier = gtvc::voronoi_extend(cloud, u);
      const auto tr = gtvc::test_risk(classifier, model, test_m, g.seed);
      const double br = gtvc::bayes_risk(model);
      emit({{"empirical_risk", gtvc::empirical_risk(u, cloud.labels)},
            {"test_risk", tr.estimate},
            {"test_ci", tr.ci_halfwidth},
            {"bayes_risk", br},
            {"excess_risk", tr.estimate - br},
            {"bayes_agreement", gtvc::bayes_agreement(classifier, model, test_m, g.seed)}},
           g, risk_out);
    }
  } catch (const gtvc::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
