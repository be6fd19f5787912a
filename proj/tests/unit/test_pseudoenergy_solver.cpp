#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pseudogas/critical_point.hpp"
#include "pseudogas/errors.hpp"
#include "pseudogas/pseudoenergy_solver.hpp"

using namespace pseudogas;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kUv = 100.0 * std::sqrt(2.0);

struct Setup {
  ModelParams p;
  MomentumGrid grid;
  KernelMatrix kernel;
};

Setup setup(double mg, double mu, Statistics s = Statistics::boson, KernelMode mode = KernelMode::exact,
            int nr = 64, int na = 32) {
  Setup out{ModelParams::dimensionless_2d(mg, mu, kUv, 0.0, s), {}, {}};
  out.grid = build_grid(out.p, nr, na);
  out.kernel = build_kernel_matrix(out.p, out.grid, mode);
  return out;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> free_epsilon(const Setup& s) {
  std::vector<double> e;
  for (double k : s.grid.nodes) e.push_back(dispersion(s.p, k) - s.p.chemical_potential);
  return e;
}

}  // namespace

TEST_CASE("free theory is a one-step fixed point") {
  const auto s = setup(0.0, -1.0);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  CHECK(field.converged);
  CHECK(field.iterations == 1);
  CHECK(field.epsilon == free_epsilon(s));
  const auto obs = observables(s.p, s.grid, field);
  CHECK(obs.free_energy == doctest::Approx(free_gas_free_energy(s.p, s.grid)).epsilon(1e-14));
  CHECK(obs.density == doctest::Approx(0.0730004166617478).epsilon(1e-9));
}

TEST_CASE("weak coupling is a single explicit step") {
  const auto s = setup(1e-6, -1.0);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  const auto e0 = free_epsilon(s);
  const auto once = pseudo_energy_rhs(s.p, s.kernel, s.grid, e0);
  double worst = 0.0;
  for (std::size_t i = 0; i < e0.size(); ++i) worst = std::max(worst, std::abs(field.epsilon[i] - once[i]));
  CHECK(worst <= 1e-9);
}

bool refuses(const Setup& s) {
  try {
    solve_pseudo_energy(s.p, s.kernel, s.grid);
  } catch (const DomainError&) {
    return true;
  } catch (const NonConvergence&) {
    return true;
  }
  return false;
}

TEST_CASE("past the critical point the solver refuses") {
  const double mu_c = closed_form_critical(0.13).beta_mu_c;
  CHECK_FALSE(refuses(setup(0.13, mu_c - 0.02)));
  CHECK(refuses(setup(0.13, mu_c + 0.05)));
  CHECK(refuses(setup(0.13, 0.3)));
}

TEST_CASE("positive boson mu is reached by continuation") {
  const auto s = setup(0.13, 0.09);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  CHECK(field.residual <= 1e-10);
  CHECK(*std::min_element(field.epsilon.begin(), field.epsilon.end()) > 0.0);
}

TEST_CASE("linearized solution") {
  const auto free_case = setup(0.0, -1.0);
  CHECK(solve_linearized(free_case.p, free_case.kernel, free_case.grid).epsilon == free_epsilon(free_case));

  const double g = 0.05;
  const auto c = setup(g, -1.0, Statistics::boson, KernelMode::constant);
  const auto lin = solve_linearized(c.p, c.kernel, c.grid);
  const double n0 = -std::log(1.0 - std::exp(-1.0)) / (2.0 * kPi);
  const auto e0 = free_epsilon(c);
  for (std::size_t i = 0; i < e0.size(); ++i) CHECK(lin.epsilon[i] == doctest::Approx(e0[i] + g * n0).epsilon(1e-10));
  CHECK_THROWS_AS(solve_linearized(setup(0.1, -1.0, Statistics::fermion).p, c.kernel, c.grid), ConfigError);
}

TEST_CASE("linearized and full solutions differ at second order") {
  for (double mg : {1e-3, 1e-2}) {
    const auto s = setup(mg, -1.0);
    const auto full = solve_pseudo_energy(s.p, s.kernel, s.grid);
    const auto lin = solve_linearized(s.p, s.kernel, s.grid);
    CHECK(max_diff(full.epsilon, lin.epsilon) <= 5.0 * mg * mg);
  }
}

TEST_CASE("thermodynamic consistency") {
  for (double mg : {0.01, 0.1}) {
    auto free_energy = [&](double mu) {
      const auto s = setup(mg, mu);
      return observables(s.p, s.grid, solve_pseudo_energy(s.p, s.kernel, s.grid)).free_energy;
    };
    const double h = 1e-4;
    const double dF = (free_energy(-1.0 + h) - free_energy(-1.0 - h)) / (2 * h);
    const auto s = setup(mg, -1.0);
    const double n = observables(s.p, s.grid, solve_pseudo_energy(s.p, s.kernel, s.grid)).density;
    CHECK(std::abs(-dF - n) / n < 1e-3);
  }
}

TEST_CASE("converged field is a fixed point") {
  const auto s = setup(0.1, -0.5);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  const auto rhs = pseudo_energy_rhs(s.p, s.kernel, s.grid, field.epsilon);
  CHECK(field.residual <= 1e-10);
  CHECK(max_diff(rhs, field.epsilon) * s.p.beta() <= 1e-10);
}

TEST_CASE("fermions converge above zero chemical potential") {
  const auto s = setup(0.1, 1.0, Statistics::fermion);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  CHECK(field.converged);
  const auto obs = observables(s.p, s.grid, field);
  for (double f : obs.filling) {
    CHECK(std::isfinite(f));
    CHECK(f > 0.0);
    CHECK(f < 1.0);
  }
}

TEST_CASE("interaction shift is bounded by the mean field") {
  for (double mg : {1e-3, 1e-2}) {
    const auto s = setup(mg, -1.0);
    const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
    const double n = observables(s.p, s.grid, field).density;
    const auto e0 = free_epsilon(s);
    for (std::size_t i = 0; i < e0.size(); ++i) {
      CHECK(field.epsilon[i] >= e0[i] - mg * n * 1.1);
      CHECK(field.epsilon[i] - e0[i] <= mg * n * 1.1);
    }
  }
}

TEST_CASE("damping does not change the answer") {
  const auto s = setup(0.1, -1.0);
  const auto a = solve_pseudo_energy(s.p, s.kernel, s.grid, {0.3, 1e-12, 10000});
  const auto b = solve_pseudo_energy(s.p, s.kernel, s.grid, {1.0, 1e-12, 10000});
  CHECK(max_diff(a.epsilon, b.epsilon) < 1e-10);
}

TEST_CASE("independent initializations reach the same solution") {
  const auto s = setup(0.1, -1.0);
  const auto ref = solve_pseudo_energy(s.p, s.kernel, s.grid, {0.5, 1e-12, 10000});
  auto e = free_epsilon(s);
  for (double& v : e) v = 1.5 * v + 0.3;
  const auto other = solve_pseudo_energy(s.p, s.kernel, s.grid, {0.5, 1e-12, 10000}, e);
  CHECK(max_diff(ref.epsilon, other.epsilon) < 1e-10);
}

TEST_CASE("observable identities") {
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    const auto s = setup(0.2, -0.7, st);
    const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
    const auto obs = observables(s.p, s.grid, field);
    const double sg = s.p.s();
    double density = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const double w = dispersion(s.p, s.grid.nodes[i]);
      const double f = obs.filling[i];
      const double f0 = obs.free_filling[i];
      density += s.grid.weights[i] * f;
      CHECK(f == doctest::Approx(1.0 / (std::exp(field.epsilon[i]) - sg)).epsilon(1e-13));
      CHECK(obs.dressed_filling[i] ==
            doctest::Approx(std::exp(field.epsilon[i] - w + s.p.chemical_potential) * f).epsilon(1e-12));
      CHECK(std::abs(obs.dressed_filling[i] - (f0 + sg * f0 / (sg * f0 + 1.0) * (f - f0))) <= 1e-12 * std::max(1.0, f));
    }
    CHECK(obs.density == doctest::Approx(density).epsilon(1e-14));
  }
}

TEST_CASE("boson fillings stay finite once converged") {
  const auto s = setup(0.13, 0.05);
  const auto field = solve_pseudo_energy(s.p, s.kernel, s.grid);
  for (double e : field.epsilon) CHECK(std::exp(e) > 1.0);
}

TEST_CASE("failure modes") {
  const auto s = setup(0.1, -1.0);
  CHECK_THROWS_AS(solve_pseudo_energy(s.p, s.kernel, s.grid, {0.5, 1e-12, 2}), NonConvergence);
  try {
    solve_pseudo_energy(s.p, s.kernel, s.grid, {0.5, 1e-12, 3});
  } catch (const NonConvergence& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.residual() > 1e-12);
  }
  PseudoEnergyField unconverged;
  unconverged.epsilon = free_epsilon(s);
  CHECK_THROWS_AS(observables(s.p, s.grid, unconverged), ConfigError);
  CHECK_THROWS_AS(solve_pseudo_energy(s.p, s.kernel, s.grid, {0.0, 1e-10, 10}), ConfigError);
}

TEST_CASE("one and three dimensions") {
  const auto p1 = ModelParams::make(1, 0.5, 0.3, 1.0, -1.0, 100.0);
  const auto g1 = build_grid(p1, 64, 0);
  const auto f1 = solve_pseudo_energy(p1, build_kernel_matrix(p1, g1), g1);
  CHECK(f1.converged);
  const auto p3 = ModelParams::make(3, 1.0, 0.5, 1.0, -1.0, 100.0);
  const auto g3 = build_grid(p3, 64, 32);
  const auto f3 = solve_pseudo_energy(p3, build_kernel_matrix(p3, g3), g3);
  CHECK(f3.converged);
  CHECK(free_density(p3, g3) == doctest::Approx(std::pow(2.0 * kPi, -1.5) *
                                                [] {
                                                  double s = 0.0;
                                                  for (int n = 1; n < 200; ++n) s += std::exp(-n) / std::pow(n, 1.5);
                                                  return s;
                                                }())
                                    .epsilon(1e-8));
}

TEST_CASE("different starting fields reach the same solution") {
  for (double mu : {-1.0, 0.05}) {
    const auto s = setup(0.1, mu);
    const auto reference = solve_pseudo_energy(s.p, s.kernel, s.grid);
    for (double shift : {0.5, 3.0}) {
      for (double scale : {0.5, 2.0}) {
        std::vector<double> start;
        for (double k : s.grid.nodes) start.push_back(scale * dispersion(s.p, k) + shift);
        const auto other = solve_pseudo_energy(s.p, s.kernel, s.grid, {}, start);
        CHECK(max_diff(other.epsilon, reference.epsilon) < 1e-8);
      }
    }
  }
}
