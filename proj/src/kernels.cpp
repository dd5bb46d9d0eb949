#include "gtvc/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <charconv>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gtvc {

KernelProfile KernelProfile::indicator(double radius, double amplitude) {
  KernelProfile k{KernelShape::indicator, radius, amplitude, radius};
  k.validate();
  return k;
}

KernelProfile KernelProfile::exponential(double length, double amplitude, double cutoff_lengths) {
  KernelProfile k{KernelShape::exponential, length, amplitude, cutoff_lengths * length};
  k.validate();
  return k;
}

KernelProfile KernelProfile::gaussian(double sigma, double amplitude, double cutoff_sigmas) {
  KernelProfile k{KernelShape::gaussian, sigma, amplitude, cutoff_sigmas * sigma};
  k.validate();
  return k;
}

double KernelProfile::support_radius() const { return shape == KernelShape::indicator ? scale : cutoff; }

void KernelProfile::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::domain_error("kernel scale must be positive");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw std::domain_error("kernel amplitude must be positive");
  if (shape != KernelShape::indicator && (!(cutoff > 0.0) || !std::isfinite(cutoff)))
    throw std::domain_error("kernel cutoff must be positive");
}

double eval(const KernelProfile& profile, double r) {
  if (!(r >= 0.0)) throw std::domain_error("kernel evaluated at negative radius");
  switch (profile.shape) {
    case KernelShape::indicator:
      return r <= profile.scale ? profile.amplitude : 0.0;
    case KernelShape::exponential:
      return r <= profile.cutoff ? profile.amplitude * std::exp(-r / profile.scale) : 0.0;
    case KernelShape::gaussian: {
      if (r > profile.cutoff) return 0.0;
      const double t = r / profile.scale;
      return profile.amplitude * std::exp(-0.5 * t * t);
    }
  }
  return 0.0;
}

double eval_scaled_distance(const KernelProfile& profile, double dist, double eps, int dim) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  return std::pow(eps, -dim) * eval(profile, dist / eps);
}

double eval_scaled(const KernelProfile& profile, std::span<const double> z, double eps) {
  double sq = 0.0;
  for (double c : z) sq += c * c;
  return eval_scaled_distance(profile, std::sqrt(sq), eps, static_cast<int>(z.size()));
}

double angular_factor(int dim) {
  if (dim < 1) throw std::domain_error("dimension must be at least 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (dim - 1)) / std::tgamma(0.5 * (dim + 1));
}

double radial_moment(const KernelProfile& profile, int power) {
  if (power < 0) throw std::domain_error("moment power must be nonnegative");
  const double s = profile.scale;
  const double a = profile.amplitude;
  const double k = power + 1.0;
  switch (profile.shape) {
    case KernelShape::indicator:
      return a * std::pow(s, k) / k;
    case KernelShape::exponential:
      // int_0^R r^p e^{-r/s} dr = s^{p+1} gamma(p+1, R/s)
      return a * std::pow(s, k) * boost::math::tgamma_lower(k, profile.cutoff / s);
    case KernelShape::gaussian:
      // t = r^2 / (2 s^2)
      return a * std::pow(s, k) * std::pow(2.0, 0.5 * (k - 2.0)) *
             boost::math::tgamma_lower(0.5 * k, 0.5 * (profile.cutoff / s) * (profile.cutoff / s));
  }
  return 0.0;
}

double surface_tension(const KernelProfile& profile, int dim) {
  profile.validate();
  return angular_factor(dim) * radial_moment(profile, dim);
}

double surface_tension_quadrature(const KernelProfile& profile, int dim) {
  profile.validate();
  const double radius = profile.support_radius();
  auto integrand = [&](double r) { return eval(profile, r) * std::pow(r, dim); };
  double error = 0.0;
  const double moment =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, radius, 20, 1e-12, &error);
  return angular_factor(dim) * moment;
}

KernelProfile normalize_for_theory(const KernelProfile& profile) {
  profile.validate();
  KernelProfile out = profile;
  if (profile.support_radius() < 2.0) {
    const double stretch = 2.0 / profile.support_radius();
    if (out.shape == KernelShape::indicator) {
      out.scale = 2.0;
      out.cutoff = 2.0;
    } else {
      out.scale *= stretch;
      out.cutoff = std::max(2.0, out.cutoff * stretch);
    }
  }
  const double at_two = eval(out, 2.0);
  if (at_two < 1.0) out.amplitude /= at_two;
  return out;
}

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad " + std::string(what) + " value '" + std::string(text) + "'");
  return value;
}

}  // namespace

KernelProfile parse_kernel(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  KernelProfile k;
  if (name == "indicator") {
    k = KernelProfile::indicator();
  } else if (name == "exp" || name == "exponential") {
    k = KernelProfile::exponential();
  } else if (name == "gauss" || name == "gaussian") {
    k = KernelProfile::gaussian();
  } else {
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "' (expected indicator|exp|gauss)");
  }
  const double cutoff_units = k.shape == KernelShape::indicator ? 1.0 : k.cutoff / k.scale;
  double cutoff_multiple = cutoff_units;
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto next = rest.find(':');
    const std::string_view item = rest.substr(0, next);
    rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("kernel option without '=': " + std::string(item));
    const auto key = item.substr(0, eq);
    const double value = parse_double(item.substr(eq + 1), key);
    if (key == "scale") {
      k.scale = value;
    } else if (key == "amp") {
      k.amplitude = value;
    } else if (key == "cutoff") {
      cutoff_multiple = value;
    } else {
      throw std::invalid_argument("unknown kernel option '" + std::string(key) + "'");
    }
  }
  k.cutoff = k.shape == KernelShape::indicator ? k.scale : cutoff_multiple * k.scale;
  k.validate();
  return k;
}

std::string to_string(const KernelProfile& profile) {
  std::ostringstream os;
  os.precision(17);
  switch (profile.shape) {
    case KernelShape::indicator:
      os << "indicator";
      break;
    case KernelShape::exponential:
      os << "exp";
      break;
    case KernelShape::gaussian:
      os << "gauss";
      break;
  }
  os << ":scale=" << profile.scale << ":amp=" << profile.amplitude;
  if (profile.shape != KernelShape::indicator) os << ":cutoff=" << profile.cutoff / profile.scale;
  return os.str();
}

}  // namespace gtvc
