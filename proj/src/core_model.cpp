#include "pseudogas/core_model.hpp"

#include <cmath>
#include <sstream>

#include "pseudogas/errors.hpp"
#include "pseudogas/quadrature_grid.hpp"

namespace pseudogas {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

ModelParams ModelParams::make(int dimension, double mass, double coupling, double temperature,
                              double chemical_potential, double uv_cutoff, double ir_cutoff,
                              Statistics statistics) {
  ModelParams p;
  p.dimension = dimension;
  p.mass = mass;
  p.coupling = coupling;
  p.temperature = temperature;
  p.chemical_potential = chemical_potential;
  p.uv_cutoff = uv_cutoff;
  p.ir_cutoff = ir_cutoff;
  p.statistics = statistics;
  p.validate();
  return p;
}

ModelParams ModelParams::dimensionless_2d(double mg, double beta_mu, double uv_cutoff,
                                          double ir_cutoff, Statistics statistics) {
  return make(2, 1.0, mg, 1.0, beta_mu, uv_cutoff, ir_cutoff, statistics);
}

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (dimension < 1 || dimension > 3) fail("dimension must be 1, 2 or 3");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) fail("temperature must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) fail("mass must be positive");
  if (!(ir_cutoff >= 0.0)) fail("ir_cutoff must be nonnegative");
  if (!(uv_cutoff > ir_cutoff)) fail("uv_cutoff must exceed ir_cutoff");
  if (!std::isfinite(coupling) || !std::isfinite(chemical_potential))
    fail("coupling and chemical_potential must be finite");
  if (dimension == 1 && mass != 0.5) fail("one-dimensional gas requires mass = 1/2");
  if (statistics != Statistics::boson && statistics != Statistics::fermion)
    fail("statistics must be boson or fermion");
}

double ModelParams::fugacity() const { return std::exp(chemical_potential / temperature); }

ModelParams ModelParams::with_chemical_potential(double mu) const {
  ModelParams p = *this;
  p.chemical_potential = mu;
  p.validate();
  return p;
}

ModelParams ModelParams::with_coupling(double g) const {
  ModelParams p = *this;
  p.coupling = g;
  p.validate();
  return p;
}

ModelParams ModelParams::with_ir_cutoff(double k0) const {
  ModelParams p = *this;
  p.ir_cutoff = k0;
  p.validate();
  return p;
}

double dispersion(const ModelParams& p, double k) noexcept { return k * k / (2.0 * p.mass); }

namespace {

void require_free_domain(const ModelParams& p) {
  if (p.statistics == Statistics::boson && p.chemical_potential >= 0.0) {
    std::ostringstream os;
    os << "free filling undefined: boson chemical potential " << p.chemical_potential
       << " >= 0 lets e^{beta omega} - z vanish";
    throw FugacityError(os.str());
  }
}

}  // namespace

double free_filling(const ModelParams& p, double k) {
  require_free_domain(p);
  // z/(e^{βω} − s z) = 1/(e^{β(ω−μ)} − s)
  const double x = (dispersion(p, k) - p.chemical_potential) / p.temperature;
  if (p.statistics == Statistics::boson) return 1.0 / std::expm1(x);
  return 1.0 / (std::exp(x) + 1.0);
}

double free_log_term(const ModelParams& p, double k) {
  require_free_domain(p);
  const double y = std::exp(-(dispersion(p, k) - p.chemical_potential) / p.temperature);
  return p.s() * std::log1p(-p.s() * y);
}

double dilog_series(double x, double term_cutoff) {
  double sum = 0.0;
  double power = x;
  for (int n = 1; n < 100000; ++n) {
    const double term = power / (static_cast<double>(n) * n);
    sum += term;
    if (std::abs(term) < term_cutoff) break;
    power *= x;
  }
  return sum;
}

double free_gas_free_energy_2d_closed(const ModelParams& p) {
  if (p.dimension != 2) throw ConfigError("free_gas_free_energy_2d requires dimension 2");
  require_free_domain(p);
  const double s = p.s();
  return -(s * p.mass * p.temperature * p.temperature / (2.0 * kPi)) *
         dilog_series(s * p.fugacity(), 1e-16);
}

double free_gas_free_energy_2d(const ModelParams& p, int n_radial, double tail_tolerance) {
  if (p.dimension != 2) throw ConfigError("free_gas_free_energy_2d requires dimension 2");
  require_free_domain(p);
  ModelParams q = p;
  q.ir_cutoff = 0.0;
  const GridOptions options{tail_tolerance, 1.0, 0.0};
  auto quadrature = [&](int n) {
    const MomentumGrid grid = build_grid(q, n, 16, options);
    return integrate(grid, [&](double k) { return free_log_term(q, k); }) * q.temperature;
  };
  const double value = quadrature(n_radial);
  const double reference = quadrature(2 * n_radial);
  if (std::abs(value - reference) > 1e-9 * std::abs(reference)) {
    throw QuadratureError("free energy: radial grid does not resolve the integrand on [0, k_max]");
  }
  return value;
}

}  // namespace pseudogas
