#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mc.hpp"

using namespace om;

namespace {

McConfig small_config(std::uint64_t seed) {
  McConfig cfg;
  cfg.samples = 20'000;
  cfg.replicates = 5;
  cfg.master_seed = seed;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  McConfig cfg;
  cfg.samples = 50;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.samples = 1000;
  cfg.replicates = 4;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.replicates = 5;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("expected_max_single: zero coefficients give an exact zero") {
  const std::vector<double> zero = {0.0, 0.0};
  const McEstimate est =
      expected_max_single(Distribution::log_gamma_1p(2.0), zero, small_config(1));
  CHECK(est.value == 0.0);
  CHECK(est.spread == 0.0);
  CHECK(est.samples_total == 100'000);
}

TEST_CASE("expected_max_single: single gaussian coefficient") {
  // n = 1 reduces to E|2 xi| = 2 sqrt(2/pi)
  const std::vector<double> a = {2.0};
  McConfig cfg = small_config(2);
  cfg.samples = 100'000;
  cfg.replicates = 15;
  const McEstimate est = expected_max_single(Distribution::gaussian(), a, cfg);
  const double want = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  CHECK(std::fabs(est.value - want) < std::max(3.0 * est.spread, 0.01 * want));
  CHECK(est.estimator == Estimator::MedianOfMeans);
}

TEST_CASE("expected_max_single: the 8/3 order-statistics oracle") {
  // E max(xi_1, xi_2) for the y^-2 tail law on [1, inf):
  //   1 + int_1^inf (2 y^-2 - y^-4) dy = 8/3.
  const std::vector<double> a = {1.0, 1.0};
  McConfig cfg;
  cfg.samples = 100'000;
  cfg.replicates = 15;
  cfg.master_seed = 3;
  const McEstimate est = expected_max_single(Distribution::log_gamma_1p(2.0), a, cfg);
  CHECK(std::fabs(est.value - 8.0 / 3.0) < 0.02 * (8.0 / 3.0));
}

TEST_CASE("expected_max_product: zero matrix and factorisation oracles") {
  McConfig cfg = small_config(4);

  Matrix zero(2, 2, 0.0);
  const McEstimate z =
      expected_max_product(Distribution::gaussian(), Distribution::gaussian(), zero, cfg);
  CHECK(z.value == 0.0);

  // single atom: independence factorises to E|xi| E|eta| = 2/pi
  Matrix atom(3, 2, 0.0);
  atom.at(0, 0) = 1.0;
  McConfig big = cfg;
  big.samples = 100'000;
  big.replicates = 15;
  const McEstimate at =
      expected_max_product(Distribution::gaussian(), Distribution::gaussian(), atom, big);
  const double want = 2.0 / std::numbers::pi;
  CHECK(std::fabs(at.value - want) < std::max(4.0 * at.spread, 0.015 * want));
}

TEST_CASE("expected_max_product: positive laws factor the maximum") {
  // all-ones 2x2 with the y^-2 tail law on both sides: (8/3)^2 = 64/9
  Matrix ones(2, 2, 1.0);
  McConfig cfg;
  cfg.samples = 100'000;
  cfg.replicates = 15;
  cfg.master_seed = 5;
  const McEstimate est = expected_max_product(Distribution::log_gamma_1p(2.0),
                                              Distribution::log_gamma_1p(2.0), ones, cfg);
  CHECK(std::fabs(est.value - 64.0 / 9.0) < 0.05 * (64.0 / 9.0));
}

TEST_CASE("scale equivariance is exact for power-of-two scalings") {
  const std::vector<double> a = {0.3, 1.7, 0.9};
  std::vector<double> a4 = a;
  for (double& v : a4) v *= 4.0;
  const McConfig cfg = small_config(6);
  const McEstimate ea = expected_max_single(Distribution::log_gamma_1p(2.0), a, cfg);
  const McEstimate ea4 = expected_max_single(Distribution::log_gamma_1p(2.0), a4, cfg);
  CHECK(ea4.value == 4.0 * ea.value);
  CHECK(ea4.spread == 4.0 * ea.spread);
}

TEST_CASE("monotonicity in the coefficients under a shared seed") {
  const std::vector<double> small = {0.5, 1.0, 0.2, 0.8};
  const std::vector<double> large = {0.6, 1.0, 0.7, 1.1};
  const McConfig cfg = small_config(7);
  const Distribution st = Distribution::symmetric_stable(1.5);
  CHECK(expected_max_single(st, small, cfg).value <=
        expected_max_single(st, large, cfg).value);
}

TEST_CASE("worker count never changes the estimate") {
  const std::vector<double> a = {1.0, 0.5, 0.25};
  McConfig cfg = small_config(8);
  McEstimate prev{};
  bool first = true;
  for (std::uint32_t workers : {1u, 2u, 8u}) {
    cfg.workers = workers;
    const McEstimate est = expected_max_single(Distribution::gaussian(), a, cfg);
    if (!first) {
      CHECK(est.value == prev.value);
      CHECK(est.spread == prev.spread);
    }
    prev = est;
    first = false;
  }

  Matrix m(3, 2, 0.5);
  m.at(1, 0) = 1.5;
  McEstimate prev_prod{};
  first = true;
  for (std::uint32_t workers : {1u, 2u, 8u}) {
    cfg.workers = workers;
    const McEstimate est = expected_max_product(Distribution::symmetric_stable(1.4),
                                                Distribution::gaussian(), m, cfg);
    if (!first) CHECK(est.value == prev_prod.value);
    prev_prod = est;
    first = false;
  }
}

TEST_CASE("product degeneracy: one row factorises into mean times single") {
  // With n = 1, E E max_j |a_j xi eta_j| = E|xi| E max_j |a_j eta_j|.
  Matrix row(1, 3, 0.0);
  row.at(0, 0) = 1.0;
  row.at(0, 1) = 0.5;
  row.at(0, 2) = 0.25;
  McConfig cfg;
  cfg.samples = 100'000;
  cfg.replicates = 15;
  cfg.master_seed = 9;
  const Distribution lg = Distribution::log_gamma_1p(3.0);
  const Distribution g = Distribution::gaussian();
  const McEstimate prod = expected_max_product(lg, g, row, cfg);
  const std::vector<double> a = {1.0, 0.5, 0.25};
  const McEstimate single = expected_max_single(g, a, cfg);
  const double want = lg.mean_abs() * single.value;
  CHECK(std::fabs(prod.value - want) <
        3.0 * (prod.spread + lg.mean_abs() * single.spread) + 0.01 * want);
}

TEST_CASE("invalid shapes are rejected") {
  const McConfig cfg = small_config(10);
  const std::vector<double> empty;
  CHECK_THROWS_AS(expected_max_single(Distribution::gaussian(), empty, cfg), DomainError);
  Matrix bad;
  CHECK_THROWS_AS(
      expected_max_product(Distribution::gaussian(), Distribution::gaussian(), bad, cfg),
      DomainError);
  const std::vector<double> nonfinite = {1.0, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(expected_max_single(Distribution::gaussian(), nonfinite, cfg), DomainError);
}
