#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pseudogas/errors.hpp"
#include "pseudogas/tba_1d.hpp"

using namespace pseudogas;
using namespace pseudogas::tba;

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("kernel values") {
  CHECK(tba_kernel(0.7, 0.7, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tba_kernel(1.0, 1.0, 0.5) == doctest::Approx(16.0));
  CHECK(tba_kernel(0.0, 1e8, 1.0) < 1e-15);
  for (double k : {-2.0, 0.0, 0.4}) {
    for (double kp : {-1.0, 0.3, 5.0}) CHECK(tba_kernel(k, kp, 0.8) == tba_kernel(kp, k, 0.8));
  }
}

TEST_CASE("kernel normalization") {
  const auto grid = build_tba_grid(1.0, -1.0, 512);
  for (double g : {0.5, 1.0, 4.0}) {
    for (double k : {0.0, 0.5, 2.0}) CHECK(std::abs(tba_kernel_integral(k, g, grid) - 1.0) < 1e-10);
  }
}

TEST_CASE("free-fermion limits") {
  const auto grid = build_tba_grid(1.0, -1.0, 128);
  TbaOptions off;
  off.kernel_scale = 0.0;
  const auto field = solve_yang_yang(0.5, 1.0, -1.0, grid, off);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(field.epsilon[i] == grid.nodes[i] * grid.nodes[i] + 1.0);
  CHECK(field.iterations == 1);
  // Arbitrary-precision quadrature of −(1/π)∫₀^∞ log(1 + e^{−(k²+1)}).
  CHECK(std::abs(tba_free_energy(field, grid) - -0.0924693071961356) < 1e-10);
  CHECK(std::abs(free_fermion_free_energy(1.0, -1.0, grid) - -0.0924693071961356) < 1e-10);

  const auto tonks = solve_yang_yang(1e3, 1.0, -1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(tonks.epsilon[i] - (grid.nodes[i] * grid.nodes[i] + 1.0)) < 1e-2);
  }
}

TEST_CASE("empty system") {
  TbaField field;
  const auto grid = build_tba_grid(1.0, -1.0, 32);
  field.epsilon.assign(grid.size(), 1e6);
  CHECK(tba_free_energy(field, grid) == 0.0);
}

TEST_CASE("interacting solution") {
  const auto grid = build_tba_grid(1.0, -1.0, 128);
  const auto field = solve_yang_yang(0.5, 1.0, -1.0, grid);
  CHECK(field.converged);
  const auto rhs = yang_yang_rhs(0.5, 1.0, -1.0, grid, field.epsilon);
  double worst = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) worst = std::max(worst, std::abs(rhs[i] - field.epsilon[i]));
  CHECK(worst <= 1e-10);
  const double f = tba_free_energy(field, grid);
  // The kernel term lowers ε and with it F.
  CHECK(f < free_fermion_free_energy(1.0, -1.0, grid));
  CHECK(f == doctest::Approx(-0.116622817907).epsilon(1e-9));
  CHECK_THROWS_AS(solve_yang_yang(0.5, 1.0, -1.0, grid, {0.5, 1e-14, 3, 1.0}), NonConvergence);
}

TEST_CASE("first-order agreement with the foam ring term") {
  const auto coarse = leading_order_comparison(0.5, 1.0, -1.0, build_tba_grid(1.0, -1.0, 128));
  const auto fine = leading_order_comparison(0.5, 1.0, -1.0, build_tba_grid(1.0, -1.0, 256));
  CHECK(coarse.relative_gap < 1e-3);
  CHECK(fine.relative_gap < coarse.relative_gap / 3.0);
  CHECK(fine.tba_first_order < 0.0);

  const auto weak = leading_order_comparison(0.1, 1.0, -1.0, build_tba_grid(1.0, -1.0, 1024));
  CHECK(weak.relative_gap < 1e-4);
  // The even branch of the kernel does not reproduce the expansion.
  CHECK(std::abs(fine.foam_first_order_even_kernel - fine.tba_first_order) > 0.5 * std::abs(fine.tba_first_order));
}

TEST_CASE("argument checks") {
  const auto grid = build_tba_grid(1.0, -1.0, 32);
  CHECK_THROWS_AS(leading_order_comparison(0.0, 1.0, -1.0, grid), DomainError);
  CHECK_THROWS_AS(build_tba_grid(0.0, -1.0, 32), ConfigError);
  CHECK_THROWS_AS(yang_yang_rhs(0.5, 1.0, -1.0, grid, std::vector<double>(3, 0.0)), ConfigError);
  (void)kPi;
}
