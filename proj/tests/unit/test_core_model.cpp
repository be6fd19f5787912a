#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pseudogas/core_model.hpp"
#include "pseudogas/errors.hpp"

using namespace pseudogas;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Li₂ by brute-force partial sums, independent of the library's cutoff rule.
double li2_oracle(double x) {
  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n <= 20000; ++n) {
    power *= x;
    sum += power / (static_cast<double>(n) * n);
  }
  return sum;
}

ModelParams gas2d(double mu, Statistics s) { return ModelParams::make(2, 1.0, 0.0, 1.0, mu, 100.0, 0.0, s); }

}  // namespace

TEST_CASE("construction validates its invariants") {
  CHECK_NOTHROW(ModelParams::make(2, 1.0, 0.1, 1.0, -1.0, 10.0));
  CHECK_THROWS_AS(ModelParams::make(2, 1.0, 0.1, 0.0, -1.0, 10.0), ConfigError);
  CHECK_THROWS_AS(ModelParams::make(2, -1.0, 0.1, 1.0, -1.0, 10.0), ConfigError);
  CHECK_THROWS_AS(ModelParams::make(2, 1.0, 0.1, 1.0, -1.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(ModelParams::make(2, 1.0, 0.1, 1.0, -1.0, 1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(ModelParams::make(4, 1.0, 0.1, 1.0, -1.0, 10.0), ConfigError);
  CHECK_THROWS_AS(ModelParams::make(1, 1.0, 0.1, 1.0, -1.0, 10.0), ConfigError);
  CHECK_NOTHROW(ModelParams::make(1, 0.5, 0.1, 1.0, -1.0, 10.0));
}

TEST_CASE("dimensionless constructor fixes m = T = 1") {
  const auto p = ModelParams::dimensionless_2d(0.13, -0.5, 50.0);
  CHECK(p.mass == 1.0);
  CHECK(p.temperature == 1.0);
  CHECK(p.coupling == doctest::Approx(0.13));
  CHECK(p.chemical_potential == -0.5);
  CHECK(p.dimension == 2);
}

TEST_CASE("dispersion") {
  const auto p = gas2d(-1.0, Statistics::boson);
  CHECK(dispersion(p, 0.0) == 0.0);
  CHECK(dispersion(p, 2.0) == doctest::Approx(2.0));
  double prev = -1.0;
  for (double k = 0.0; k < 5.0; k += 0.1) {
    CHECK(dispersion(p, k) > prev);
    prev = dispersion(p, k);
  }
}

TEST_CASE("free filling values") {
  CHECK(free_filling(gas2d(-1.0, Statistics::boson), 0.0) == doctest::Approx(0.581976706869326).epsilon(1e-14));
  CHECK(free_filling(gas2d(0.0, Statistics::fermion), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(free_filling(gas2d(-800.0, Statistics::boson), 0.3) == 0.0);
  CHECK_THROWS_AS(free_filling(gas2d(0.0, Statistics::boson), 1.0), FugacityError);
  CHECK_THROWS_AS(free_filling(gas2d(0.3, Statistics::boson), 1.0), DomainError);
}

TEST_CASE("free filling is positive and decreasing") {
  for (Statistics s : {Statistics::boson, Statistics::fermion}) {
    for (double mu : {-5.0, -1.0, -0.1}) {
      const auto p = gas2d(mu, s);
      double prev = INFINITY;
      for (double k = 0.0; k < 8.0; k += 0.05) {
        const double f = free_filling(p, k);
        CHECK(std::isfinite(f));
        CHECK(f > 0.0);
        CHECK(f < prev);
        prev = f;
      }
    }
  }
}

TEST_CASE("dilogarithm series") {
  CHECK(dilog_series(0.0) == 0.0);
  CHECK(dilog_series(0.5) == doctest::Approx(0.5822405264650125).epsilon(1e-11));
  for (double x : {std::exp(-1.0), -std::exp(-1.0), std::exp(-0.1), -std::exp(-0.1), 0.01}) {
    CHECK(dilog_series(x) == doctest::Approx(li2_oracle(x)).epsilon(1e-10));
  }
}

TEST_CASE("2D free energy examples") {
  // Values from arbitrary-precision polylog evaluation.
  CHECK(free_gas_free_energy_2d(gas2d(-1.0, Statistics::boson)) ==
        doctest::Approx(-0.0650552653415818).epsilon(1e-9));
  CHECK(free_gas_free_energy_2d(gas2d(-1.0, Statistics::fermion)) ==
        doctest::Approx(-0.0538975025957758).epsilon(1e-9));
  CHECK(std::abs(free_gas_free_energy_2d(gas2d(-700.0, Statistics::boson))) < 1e-300);
}

TEST_CASE("2D free energy matches the dilogarithm closed form") {
  for (Statistics s : {Statistics::boson, Statistics::fermion}) {
    const double sg = sign(s);
    for (double mu = -5.0; mu <= -0.1 + 1e-12; mu += 0.1) {
      const auto p = gas2d(mu, s);
      const double oracle = -sg / (2.0 * kPi) * li2_oracle(sg * std::exp(mu));
      const double value = free_gas_free_energy_2d(p);
      CHECK(std::abs(value - oracle) <= 1e-8 * std::abs(oracle));
      CHECK(std::abs(free_gas_free_energy_2d_closed(p) - oracle) <= 1e-10 * std::abs(oracle));
    }
  }
}

TEST_CASE("free energy scales with mass and temperature") {
  const auto p = ModelParams::make(2, 2.0, 0.0, 3.0, -1.5, 100.0);
  const double z = std::exp(-0.5);
  const double oracle = -(2.0 / (2.0 * kPi)) * 9.0 * li2_oracle(z);
  CHECK(free_gas_free_energy_2d(p) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("particle number from the free energy") {
  for (Statistics s : {Statistics::boson, Statistics::fermion}) {
    const double sg = sign(s);
    for (double mu : {-3.0, -1.0, -0.3}) {
      const double h = 1e-5;
      const double dF = (free_gas_free_energy_2d(gas2d(mu + h, s)) - free_gas_free_energy_2d(gas2d(mu - h, s))) / (2 * h);
      const double n = -sg / (2.0 * kPi) * std::log(1.0 - sg * std::exp(mu));
      CHECK(std::abs(-dF - n) <= 1e-5 * n);
    }
  }
}

TEST_CASE("truncated tail is reported") {
  CHECK_THROWS_AS(free_gas_free_energy_2d(gas2d(-1.0, Statistics::boson), 16, 1e-300), QuadratureError);
}
