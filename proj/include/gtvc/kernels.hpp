#pragma once

#include <span>
#include <string>
#include <string_view>

namespace gtvc {

enum class KernelShape { indicator, exponential, gaussian };

/// Radial kernel profile eta : [0, inf) -> [0, inf).
///
/// indicator:   amplitude * 1{r <= scale}
/// exponential: amplitude * exp(-r / scale),        truncated at cutoff
/// gaussian:    amplitude * exp(-r^2 / (2 scale^2)), truncated at cutoff
///
/// Every profile has a finite support radius so that neighbor queries are
/// finite. Evaluation, surface tension and graph weights all use the truncated
/// profile, so they agree with each other exactly.
struct KernelProfile {
  KernelShape shape = KernelShape::indicator;
  double scale = 1.0;
  double amplitude = 1.0;
  /// Truncation radius in units of r; ignored for the indicator.
  double cutoff = 0.0;

  static KernelProfile indicator(double radius = 1.0, double amplitude = 1.0);
  static KernelProfile exponential(double length = 1.0, double amplitude = 1.0, double cutoff_lengths = 12.0);
  static KernelProfile gaussian(double sigma = 1.0, double amplitude = 1.0, double cutoff_sigmas = 8.0);

  /// Largest r with eta(r) > 0.
  double support_radius() const;

  void validate() const;
};

/// eta(r). Throws std::domain_error for r < 0.
double eval(const KernelProfile& profile, double r);

/// eta_eps(z) = eps^{-d} eta(|z| / eps) with d = z.size().
double eval_scaled(const KernelProfile& profile, std::span<const double> z, double eps);

/// Same as eval_scaled for a precomputed distance |z|.
double eval_scaled_distance(const KernelProfile& profile, double dist, double eps, int dim);

/// Surface area of the unit sphere S^{d-1} weighted by |omega_1|:
/// int_{S^{d-1}} |omega_1| d omega = 2 pi^{(d-1)/2} / Gamma((d+1)/2).
double angular_factor(int dim);

/// int_0^inf eta(r) r^power dr in closed form.
double radial_moment(const KernelProfile& profile, int power);

/// sigma_eta = int_{R^d} eta(|h|) |h_1| dh, closed form.
double surface_tension(const KernelProfile& profile, int dim);

/// sigma_eta by adaptive Gauss-Kronrod quadrature in r times the analytic
/// angular factor. Used to cross-check surface_tension.
double surface_tension_quadrature(const KernelProfile& profile, int dim);

/// Rescales support and amplitude so that eta(r) >= 1 on [0, 2].
KernelProfile normalize_for_theory(const KernelProfile& profile);

/// Parses "indicator", "exp", "gauss", optionally followed by
/// ":scale=<f>", ":amp=<f>", ":cutoff=<f>" (any order, any subset).
KernelProfile parse_kernel(std::string_view text);

std::string to_string(const KernelProfile& profile);

}  // namespace gtvc
