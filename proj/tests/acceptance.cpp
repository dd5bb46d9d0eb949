// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gtvc/graph.hpp"
#include "gtvc/metrics.hpp"
#include "gtvc/rng.hpp"
#include "gtvc/solver.hpp"
#include "gtvc/sweep.hpp"
#include "oracles.hpp"

using namespace gtvc;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome exact_solver_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> log_lambda(-3.0, 1.0);
  std::uniform_int_distribution<int> size(1, 12);
  double worst = 0.0;
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 2;
    const std::size_t n = size(rng);
    const auto pts = oracle::uniform_points(rng, n, dim);
    const auto y = oracle::random_labels(rng, n);
    const double lambda = std::pow(10.0, log_lambda(rng));
    const double eps = 0.25 + 0.5 * (trial % 5) / 4.0;
    const auto g = NeighborGraph::build(pts, dim, eps, KernelProfile::indicator());
    const double mc = solve_mincut(g, y, lambda).energy_binary;
    const double bf = solve_brute_force(g, y, lambda).energy_binary;
    const double diff = std::abs(mc - bf) / std::max(1e-300, bf);
    worst = std::max(worst, diff);
    // Tied optima reached by different vectors may sum in a different order.
    mismatches += diff > 1e-12;
  }
  return {mismatches == 0, fmt("100 instances, max relative difference %.1e", worst)};
}

Outcome relaxation_tightness() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> size(200, 2000);
  std::uniform_real_distribution<double> log_lambda(-2.5, -1.0);
  const auto model = models::half_plane(0.2, 0.8);
  double worst = 0.0;
  std::size_t non_constant = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = size(rng);
    const auto cloud = sample(model, n, 900 + trial);
    const double eps = std::pow(double(n), -1.0 / 3.0);
    const auto g = NeighborGraph::build(cloud, eps, KernelProfile::indicator());
    SolverConfig cfg;
    cfg.lambda = std::pow(10.0, log_lambda(rng));
    const auto pd = solve_primal_dual(g, cloud.labels, cfg);
    const auto mc = solve_mincut(g, cloud.labels, cfg.lambda);
    worst = std::max(worst, (pd.energy_binary - mc.energy_binary) / mc.energy_binary);
    non_constant += std::any_of(mc.u_binary.begin(), mc.u_binary.end(), [&](double v) { return v != mc.u_binary[0]; });
  }
  return {worst <= 1e-4, fmt("20 instances (%.0f with non-constant minimizers), worst relative excess %.2e",
                             double(non_constant), worst)};
}

Outcome overfitting_regime() {
  const auto model = models::quadrant();
  bool ok = true;
  std::string detail;
  for (std::size_t n : {1000, 10000}) {
    const double eps = std::pow(double(n), -1.0 / 3.0);
    const double lambda = eps * 1e-3;
    const auto cloud = sample(model, n, derive_seed(1, n));
    const auto g = NeighborGraph::build(cloud, eps, KernelProfile::indicator());
    const auto cert = certify_overfit(g, lambda);
    const auto mc = solve_mincut(g, cloud.labels, lambda);
    SolverConfig cfg;
    cfg.lambda = lambda;
    const auto pd = solve_primal_dual(g, cloud.labels, cfg);
    bool equal = true;
    for (std::size_t i = 0; i < n; ++i)
      equal &= mc.u_binary[i] == cloud.labels[i] && pd.u_binary[i] == cloud.labels[i];
    const double risk = empirical_risk(mc.u_binary, cloud.labels);
    ok &= cert.certified && equal && risk == 0.0;
    detail += fmt("n=%.0f margin %.4f R_n %.1g; ", double(n), cert.margin, risk);
  }
  return {ok, detail};
}

Outcome underfitting_regime() {
  const auto model = models::asymmetric_quadrant();
  const double target = risk_of_constant(model, median_label(model));
  bool ok = true;
  std::string detail;
  for (std::size_t n : {1000, 10000}) {
    const double eps = std::pow(double(n), -1.0 / 3.0);
    const auto cloud = sample(model, n, derive_seed(1, n));
    const auto g = NeighborGraph::build(cloud, eps, KernelProfile::indicator());
    const auto mc = solve_mincut(g, cloud.labels, 1e3);
    std::size_t ones = 0;
    for (auto y : cloud.labels) ones += y;
    const double majority = 2 * ones >= n ? 1.0 : 0.0;
    const bool constant = std::all_of(mc.u_binary.begin(), mc.u_binary.end(), [&](double v) { return v == majority; });
    const auto risk = test_risk(voronoi_extend(cloud, mc.u_binary), model, 20000, derive_seed(1, 0x7E57));
    const double gap = std::abs(risk.estimate - target);
    ok &= constant && gap <= 3 * risk.ci_halfwidth;
    detail += fmt("n=%.0f constant=%.0f |test-R(u_inf)| %.4f <= %.4f; ", double(n), majority, gap,
                  3 * risk.ci_halfwidth);
  }
  return {ok, detail};
}

Outcome consistency_regime() {
  SweepConfig config;
  config.model_json = "builtin:quadrant";
  config.n_list = {500, 2000, 8000};
  config.eps_rule = {1.0, -1.0 / 3.0};
  config.lambda_rules = {{Regime::consistent, 1.0, 0.25}};
  config.seeds = {1, 2, 3, 4, 5};
  const auto model = config.model();
  std::vector<double> excess, disagreement, constants;
  for (std::size_t n : config.n_list) {
    std::vector<double> e, d;
    double c = 0;
    for (auto s : config.seeds) {
      const auto run = run_single(model, n, config.lambda_rules[0], config, s);
      e.push_back(run.row.excess_risk);
      d.push_back(1.0 - run.row.bayes_agreement);
      c += run.row.constant_solution;
    }
    excess.push_back(median(e));
    disagreement.push_back(median(d));
    constants.push_back(c);
  }
  const bool ok = excess[0] > excess[1] && excess[1] > excess[2] && disagreement[0] > disagreement[1] &&
                  disagreement[1] > disagreement[2] && excess[2] <= 0.05;
  return {ok, fmt("median excess %.4f, %.4f, %.4f; ", excess[0], excess[1], excess[2]) +
                  fmt("median disagreement %.4f, %.4f, %.4f; ", disagreement[0], disagreement[1], disagreement[2]) +
                  fmt("constant solutions %.0f/5, %.0f/5, %.0f/5", constants[0], constants[1], constants[2])};
}

Outcome surface_tension_check() {
  const auto k = KernelProfile::indicator();
  const double e1 = std::abs(surface_tension(k, 1) - 1.0);
  const double e2 = std::abs(surface_tension(k, 2) - 4.0 / 3.0) / (4.0 / 3.0);
  const double q1 = std::abs(surface_tension_quadrature(k, 1) - 1.0);
  const double q2 = std::abs(surface_tension_quadrature(k, 2) - 4.0 / 3.0) / (4.0 / 3.0);
  const double worst = std::max({e1, e2, q1, q2});
  return {worst <= 1e-6, fmt("d=1 %.15g, d=2 %.15g, max relative error %.1e", surface_tension(k, 1),
                             surface_tension(k, 2), worst)};
}

Outcome gamma_trend() {
  // GTV of a fixed indicator is a U-statistic whose seed-to-seed spread at
  // n = 1000 (about 10%) is as large as its bias, so the trend is read off the
  // mean over nine independent clouds per n.
  const auto model = models::half_plane();
  const Interface vertical{2, {{0.5, 0.0, 0.5, 1.0}}};
  const std::vector<std::size_t> ns{1000, 4000, 16000};
  std::vector<double> mean(ns.size(), 0.0);
  const int seeds = 9;
  double target = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    const auto rows = gamma_check(model, vertical, KernelProfile::indicator(), ns, {1.0, -0.25}, s);
    for (std::size_t k = 0; k < ns.size(); ++k) mean[k] += rows[k].gtv / seeds;
    target = rows[0].target;
  }
  std::vector<double> err;
  for (double m : mean) err.push_back(std::abs(m - target));
  const bool ok = err[0] > err[1] && err[1] > err[2] && err[2] / target <= 0.15;
  return {ok, fmt("target %.4f, |mean GTV - target| %.4f, %.4f, %.4f", target, err[0], err[1], err[2]) +
                  fmt(" (final relative %.3f)", err[2] / target)};
}

Outcome tl1_exactness() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 3;
    const std::size_t n = 1 + trial % 6;
    const auto a = oracle::uniform_points(rng, n, dim), b = oracle::uniform_points(rng, n, dim);
    std::vector<double> fa(n), fb(n);
    for (auto& v : fa) v = U(rng);
    for (auto& v : fb) v = U(rng);
    const double exact = tl1_exact(a, fa, b, fb, dim).cost;
    worst = std::max(worst, std::abs(exact - oracle::tl1_permutations(a, fa, b, fb, dim)));
  }
  double axiom = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const int dim = 2;
    std::vector<std::vector<double>> p, f;
    for (int k = 0; k < 3; ++k) {
      p.push_back(oracle::uniform_points(rng, n, dim));
      f.emplace_back(n);
      for (auto& v : f.back()) v = U(rng);
    }
    auto d = [&](int i, int j) { return tl1_exact(p[i], f[i], p[j], f[j], dim).cost; };
    axiom = std::max(axiom, std::abs(d(0, 1) - d(1, 0)));
    axiom = std::max(axiom, d(0, 2) - d(0, 1) - d(1, 2));
    axiom = std::max(axiom, d(0, 0));
  }
  return {worst <= 1e-10 && axiom <= 1e-10,
          fmt("max |assignment - permutation min| %.1e, max axiom violation %.1e", worst, axiom)};
}

Outcome concentration_trend() {
  const auto model = models::quadrant();
  std::vector<double> med;
  for (std::size_t n : {1000, 10000}) {
    const double eps = std::pow(double(n), -1.0 / 3.0);
    std::vector<double> v;
    for (std::uint64_t s = 1; s <= 3; ++s) v.push_back(concentration_diagnostic(sample(model, n, derive_seed(s, n)), model, eps));
    med.push_back(median(v));
  }
  return {med[1] < med[0], fmt("3-seed median %.4f (n=1e3) -> %.4f (n=1e4)", med[0], med[1])};
}

Outcome graph_identities() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double div_err = 0.0, homog_err = 0.0, subadd = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 3;
    const std::size_t n = 20 + 3 * trial;
    const auto pts = oracle::uniform_points(rng, n, dim);
    const KernelProfile k = trial % 3 == 0   ? KernelProfile::indicator()
                            : trial % 3 == 1 ? KernelProfile::gaussian(0.3)
                                             : KernelProfile::exponential(0.2);
    const auto g = NeighborGraph::build(pts, dim, 0.2 + 0.3 * (trial % 4) / 3.0, k);
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = U(rng);
    for (auto& x : w) x = U(rng);
    auto p = EdgeField::zeros(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      p.forward[e] = U(rng);
      p.backward[e] = U(rng);
    }
    const auto div = divergence(g, p);
    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += v[i] * div[i];
      scale += std::abs(v[i] * div[i]);
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edges()[e];
      // ordered pairs (i, j) and (j, i)
      rhs += ed.weight * (p.forward[e] * (v[ed.j] - v[ed.i]) + p.backward[e] * (v[ed.i] - v[ed.j]));
    }
    div_err = std::max(div_err, std::abs(lhs - rhs) / std::max(scale, 1e-300));

    const double base = gtv(g, v);
    for (double alpha : {-2.5, 0.3, 7.0}) {
      std::vector<double> av(v);
      for (auto& x : av) x *= alpha;
      homog_err = std::max(homog_err, std::abs(gtv(g, av) - std::abs(alpha) * base) / std::max(base, 1e-300));
    }
    std::vector<double> sum(n);
    for (std::size_t i = 0; i < n; ++i) sum[i] = v[i] + w[i];
    const double tw = gtv(g, w);
    subadd = std::max(subadd, (gtv(g, sum) - base - tw) / std::max(base + tw, 1e-300));
  }
  return {div_err <= 1e-10 && homog_err <= 1e-10 && subadd <= 1e-10,
          fmt("divergence identity %.1e, homogeneity %.1e, subadditivity excess %.1e", div_err, homog_err, subadd)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 exact solver matches enumeration", 10, exact_solver_oracle},
      {"2 primal-dual within 1e-4 of min-cut", 120, relaxation_tightness},
      {"3 overfitting regime reproduces labels", 60, overfitting_regime},
      {"4 underfitting regime gives majority constant", 60, underfitting_regime},
      {"5 consistency regime trend", 600, consistency_regime},
      {"6 indicator surface tension", 1, surface_tension_check},
      {"7 GTV approaches sigma * TV", 120, gamma_trend},
      {"8 TL1 exactness and metric axioms", 10, tl1_exactness},
      {"9 concentration diagnostic decreases", 60, concentration_trend},
      {"10 divergence identity, homogeneity, subadditivity", 10, graph_identities},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %s: %s [%.2fs / %.0fs budget%s]\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
