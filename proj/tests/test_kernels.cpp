#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "gtvc/kernels.hpp"

using namespace gtvc;

TEST_CASE("eval: support and amplitude") {
  const auto ind = KernelProfile::indicator(1.0);
  CHECK(eval(ind, 0.5) == 1.0);
  CHECK(eval(ind, 1.5) == 0.0);
  CHECK(eval(ind, 1.0) == 1.0);
  const auto ex = KernelProfile::exponential(1.0, 2.5);
  CHECK(eval(ex, 0.0) == 2.5);
  CHECK_THROWS_AS(eval(ind, -0.1), std::domain_error);
}

TEST_CASE("eval is non-increasing on a grid") {
  for (const auto& k : {KernelProfile::indicator(0.7), KernelProfile::exponential(0.3, 2.0),
                        KernelProfile::gaussian(0.5, 1.0)}) {
    double prev = eval(k, 0.0);
    for (int s = 1; s <= 4000; ++s) {
      const double v = eval(k, s * 0.001);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("eval_scaled") {
  const auto ind = KernelProfile::indicator(1.0);
  const std::vector<double> z{0.4, 0.0};
  CHECK(eval_scaled(ind, z, 1.0) == doctest::Approx(1.0));
  CHECK(eval_scaled(ind, z, 0.5) == doctest::Approx(4.0));
  const std::vector<double> far{2.0, 0.0};
  CHECK(eval_scaled(ind, far, 0.5) == 0.0);
  CHECK_THROWS_AS(eval_scaled(ind, z, 0.0), std::domain_error);
}

TEST_CASE("surface tension of the indicator kernel") {
  const auto ind = KernelProfile::indicator(1.0);
  CHECK(std::abs(surface_tension(ind, 1) - 1.0) < 1e-12);
  CHECK(std::abs(surface_tension(ind, 2) - 4.0 / 3.0) < 1e-12);
  CHECK(std::abs(surface_tension(ind, 3) - std::numbers::pi / 2.0) < 1e-12);
  for (int d = 1; d <= 3; ++d) {
    const double a = surface_tension(ind, d), q = surface_tension_quadrature(ind, d);
    CHECK(std::abs(a - q) / a < 1e-6);
  }
}

TEST_CASE("surface tension: 2-D polar integral computed independently") {
  // sigma = int_0^R int_0^{2pi} eta(r) r |cos t| r dt dr = 4 int eta(r) r^2 dr
  for (const auto& k : {KernelProfile::exponential(0.5, 1.0), KernelProfile::gaussian(0.8, 3.0)}) {
    const double R = k.support_radius();
    const double radial =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate([&](double r) { return eval(k, r) * r * r; }, 0.0,
                                                                      R, 15, 1e-12);
    CHECK(std::abs(surface_tension(k, 2) - 4.0 * radial) / (4.0 * radial) < 1e-6);
  }
}

TEST_CASE("surface tension is linear in amplitude") {
  for (int d = 1; d <= 3; ++d) {
    const double base = surface_tension(KernelProfile::gaussian(0.4, 1.0), d);
    CHECK(surface_tension(KernelProfile::gaussian(0.4, 3.0), d) == doctest::Approx(3.0 * base).epsilon(1e-12));
  }
}

TEST_CASE("integral of eta_eps over R^d does not depend on eps") {
  // 2-D radial quadrature of eps^-2 eta(r/eps) over the disk of radius R eps.
  for (const auto& k : {KernelProfile::indicator(1.0), KernelProfile::exponential(0.4), KernelProfile::gaussian(0.6)}) {
    auto mass = [&](double eps) {
      const double R = k.support_radius() * eps;
      return 2.0 * std::numbers::pi *
             boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                 [&](double r) { return eval_scaled_distance(k, r, eps, 2) * r; }, 0.0, R, 15, 1e-12);
    };
    const double a = mass(0.1), b = mass(0.37);
    CHECK(std::abs(a - b) / a < 1e-4);
  }
}

TEST_CASE("normalize_for_theory: eta >= 1 on [0, 2]") {
  for (const auto& k : {KernelProfile::indicator(0.5, 0.2), KernelProfile::exponential(0.3, 0.5),
                        KernelProfile::gaussian(1.0, 1.0)}) {
    const auto t = normalize_for_theory(k);
    for (int s = 0; s <= 200; ++s) CHECK(eval(t, s * 0.01) >= 1.0 - 1e-12);
  }
}

TEST_CASE("parse_kernel") {
  const auto k = parse_kernel("gauss:scale=0.5:amp=2");
  CHECK(k.shape == KernelShape::gaussian);
  CHECK(k.scale == 0.5);
  CHECK(k.amplitude == 2.0);
  CHECK(parse_kernel("exp").shape == KernelShape::exponential);
  CHECK(parse_kernel(to_string(k)).scale == 0.5);
  CHECK_THROWS_AS(parse_kernel("box"), std::invalid_argument);
  CHECK_THROWS_AS(parse_kernel("indicator:scale=-1"), std::domain_error);
  CHECK_THROWS_AS(parse_kernel("indicator:width=2"), std::invalid_argument);
}
