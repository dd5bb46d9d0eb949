#include <doctest.h>

#include <cmath>
#include <vector>

#include "gtvc/groundtruth.hpp"
#include "gtvc/io.hpp"
#include "gtvc/rng.hpp"

using namespace gtvc;

namespace {

GroundTruthModel uniform_square(double mu) { return models::constant_mu(mu, 2); }

}  // namespace

TEST_CASE("sampling: mu = 1 gives all ones") {
  const auto cloud = sample(uniform_square(1.0), 500, 3);
  for (auto y : cloud.labels) CHECK(y == 1);
  CHECK_THROWS_AS(sample(uniform_square(1.0), 0, 3), std::domain_error);
}

TEST_CASE("sampling: quadrant label frequency and quadrant counts") {
  const std::size_t n = 100000;
  const auto cloud = sample(models::quadrant(), n, 11);
  double ones = 0;
  for (auto y : cloud.labels) ones += y;
  const double sd = std::sqrt(0.25 / double(n));
  CHECK(std::abs(ones / double(n) - 0.5) < 3 * sd);

  const std::size_t m = 10000;
  const auto u = sample(uniform_square(0.9), m, 5);
  std::vector<double> counts(4, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto x = u.point(i);
    counts[(x[0] >= 0.5 ? 1 : 0) + (x[1] >= 0.5 ? 2 : 0)] += 1;
  }
  const double q_sd = std::sqrt(double(m) * 0.25 * 0.75);
  for (double c : counts) CHECK(std::abs(c - double(m) / 4) < 4 * q_sd);
}

TEST_CASE("sampling is reproducible and points lie in D") {
  const auto a = sample(models::asymmetric_quadrant(), 2000, 42);
  const auto b = sample(models::asymmetric_quadrant(), 2000, 42);
  CHECK(a.points == b.points);
  CHECK(a.labels == b.labels);
  const auto c = sample(models::asymmetric_quadrant(), 2000, 43);
  CHECK(a.points != c.points);
  CHECK_NOTHROW(a.validate());
}

TEST_CASE("asymmetric density puts 60% of the mass on mu = 0.55 cells") {
  const auto model = models::asymmetric_quadrant();
  const std::size_t n = 50000;
  const auto cloud = sample(model, n, 8);
  double hi = 0;
  for (std::size_t i = 0; i < n; ++i) hi += model.mu_at(cloud.point(i)) > 0.5;
  CHECK(std::abs(hi / double(n) - 0.6) < 4 * std::sqrt(0.24 / double(n)));
}

TEST_CASE("bayes_classify") {
  const auto q = models::quadrant();
  const std::vector<double> ul{0.25, 0.75}, ll{0.25, 0.25}, lr{0.75, 0.25}, center{0.5, 0.5};
  CHECK(bayes_classify(q, ul) == 1);
  CHECK(bayes_classify(q, ll) == 0);
  CHECK(bayes_classify(q, lr) == 1);
  CHECK(bayes_classify(q, center) == 1);  // boundary point touches a mu = 0.55 cell
  const std::vector<double> outside{1.5, 0.5};
  CHECK_THROWS_AS(bayes_classify(q, outside), std::domain_error);
  CHECK(bayes_classify(uniform_square(0.9), ll) == 1);
}

TEST_CASE("bayes risk, median label, constant risks") {
  CHECK(bayes_risk(models::quadrant()) == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(bayes_risk(uniform_square(1.0)) == 0.0);
  CHECK(bayes_risk(uniform_square(0.5 + 0.13)) == doctest::Approx(0.37).epsilon(1e-14));

  CHECK(median_label(models::asymmetric_quadrant()) == 1);
  CHECK(median_label(uniform_square(0.9)) == 1);
  CHECK(median_label(uniform_square(0.2)) == 0);
  CHECK_THROWS_AS(median_label(models::quadrant()), DegenerateMedianError);

  CHECK(risk_of_constant(models::quadrant(), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(risk_of_constant(uniform_square(1.0), 1.0) == 0.0);
  // c = 0 reduces to int mu rho: asymmetric model gives 0.6*0.55 + 0.4*0.45
  CHECK(risk_of_constant(models::asymmetric_quadrant(), 0.0) == doctest::Approx(0.51).epsilon(1e-14));

  for (const auto& m : {models::quadrant(), models::asymmetric_quadrant(), models::half_plane(), uniform_square(0.3)}) {
    CHECK(bayes_risk(m) <= risk_of_constant(m, 0.0) + 1e-15);
    CHECK(bayes_risk(m) <= risk_of_constant(m, 1.0) + 1e-15);
  }
}

TEST_CASE("Monte-Carlo risk of u_B matches bayes_risk") {
  const auto model = models::asymmetric_quadrant();
  const std::size_t n = 100000;
  const auto cloud = sample(model, n, 99);
  double wrong = 0;
  for (std::size_t i = 0; i < n; ++i) wrong += bayes_classify(model, cloud.point(i)) != cloud.labels[i];
  const double p = bayes_risk(model);
  CHECK(std::abs(wrong / double(n) - p) < 3 * std::sqrt(p * (1 - p) / double(n)));
}

TEST_CASE("model validation") {
  const Box unit{{0, 0}, {1, 1}};
  const Box left{{0, 0}, {0.5, 1}}, right{{0.5, 0}, {1, 1}};
  CHECK_NOTHROW(GroundTruthModel(unit, {{unit, 1.0}}, {{left, 0.2}, {right, 0.8}}));
  CHECK_THROWS_AS(GroundTruthModel(unit, {{unit, 1.0}}, {{left, 0.5}, {right, 0.8}}), std::domain_error);
  CHECK_THROWS_AS(GroundTruthModel(unit, {{unit, 2.0}}, {{unit, 0.8}}), std::domain_error);
  CHECK_THROWS_AS(GroundTruthModel(unit, {{left, 2.0}}, {{unit, 0.8}}), std::domain_error);
  CHECK_THROWS_AS(GroundTruthModel(unit, {{unit, 1.0}}, {{unit, 1.2}}), std::domain_error);
  CHECK_THROWS_AS(GroundTruthModel(unit, {{left, 0.0}, {right, 2.0}}, {{unit, 0.8}}), std::domain_error);
}

TEST_CASE("model JSON survives a file round trip") {
  const auto m = models::asymmetric_quadrant();
  const std::string path = "gt_model_roundtrip.json";
  write_json(m.to_json(), path);
  const auto back = load_model(path);
  CHECK(bayes_risk(back) == bayes_risk(m));
  CHECK(back.id() == m.id());
  CHECK_THROWS_AS(load_model("no/such/model.json"), IoError);
}

TEST_CASE("counter RNG streams are independent and reproducible") {
  CounterRng a(7, 0), b(7, 0), c(7, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  double mean = 0;
  CounterRng d(123, 4);
  for (int i = 0; i < 100000; ++i) {
    const double u = d.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  CHECK(std::abs(mean / 1e5 - 0.5) < 4 * std::sqrt(1.0 / 12 / 1e5));
}
