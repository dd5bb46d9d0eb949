#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "gtvc/graph.hpp"

namespace gtvc {

/// Minimization of the regularized empirical risk
///
///   R_{n,lambda}(u) = lambda * GTV_{n,eps}(u) + (1/n) sum_i |u_i - y_i|.
///
/// Both terms decompose over level sets of u, so a binary global minimizer
/// exists: min-cut finds it exactly, and the relaxed primal-dual solution is
/// rounded by the best level set.

using Labels = std::span<const std::uint8_t>;

struct SolverConfig {
  double lambda = 1.0;
  int max_iters = 20000;
  /// Relative energy change over 50 iterations (or relative duality gap) at
  /// which the primal-dual iteration stops.
  double tol = 1e-7;
  /// tau / sigma for the primal-dual steps.
  double step_ratio = 1.0;
  /// Extra level in (0, 1) tried by the rounding step.
  double threshold = 0.5;

  void validate() const;
};

enum class SolveMethod { primal_dual, mincut, brute_force };

std::string to_string(SolveMethod method);

struct SolveResult {
  NodeFunction u;
  NodeFunction u_binary;
  double energy_relaxed = 0.0;
  double energy_binary = 0.0;
  int iters = 0;
  /// Duality gap of the returned relaxed point (0 for exact methods).
  double gap = 0.0;
  bool converged = true;
  SolveMethod method = SolveMethod::mincut;
};

double energy(const NeighborGraph& graph, Labels labels, double lambda, std::span<const double> u);

/// First-order primal-dual iteration on
///   min_{u in [0,1]^n} max_{|p_ij| <= 1} <u, c div(p)> + (1/n) sum |u_i - y_i|,
/// c = lambda / (n^2 eps); starts from u = labels, p = 0.
SolveResult solve_primal_dual(const NeighborGraph& graph, Labels labels, const SolverConfig& config);

/// Exact binary minimizer via s-t minimum cut.
SolveResult solve_mincut(const NeighborGraph& graph, Labels labels, double lambda);

/// Exhaustive search over {0,1}^n (n <= 20); ties go to the lexicographically
/// smallest u.
SolveResult solve_brute_force(const NeighborGraph& graph, Labels labels, double lambda);

/// Lowest-energy level set 1{u > t} over every value t taken by u, the
/// all-ones set and t = level. Equal energies go to the lowest threshold.
NodeFunction binarize(const NeighborGraph& graph, Labels labels, double lambda, std::span<const double> u,
                      double level = 0.5);

struct OverfitCertificate {
  bool certified = false;
  /// 1 - max_i s_i with s_i = (2 lambda / (eps n)) sum_j eta_eps(x_i - x_j).
  double margin = 0.0;
};

/// When certified, every minimizer equals the labels: the optimality
/// condition bounds each fidelity subgradient by s_i < 1.
OverfitCertificate certify_overfit(const NeighborGraph& graph, double lambda);

}  // namespace gtvc
