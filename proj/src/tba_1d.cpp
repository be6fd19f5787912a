#include "pseudogas/tba_1d.hpp"

#include <algorithm>
#include <cmath>

#include "pseudogas/errors.hpp"
#include "pseudogas/scattering_kernels.hpp"

namespace pseudogas::tba {

namespace {

constexpr double kPi = 3.14159265358979323846;

// log(1 + e^{−x}) for either sign of x.
double softplus_neg(double x) {
  return x > 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

// ½[K(k,k′) + K(k,−k′)], the kernel seen by an even function on the folded grid.
double folded_kernel(double k, double kp, double g) {
  return 0.5 * (tba_kernel(k, kp, g) + tba_kernel(k, -kp, g));
}

double fermi(double x) {
  return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
}

void check_inputs(double temperature, const MomentumGrid& grid) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (grid.dimension != 1) throw ConfigError("Yang-Yang equation needs a d=1 grid");
}

}  // namespace

double tba_kernel(double k, double kp, double g) {
  const double d = k - kp;
  const double q = 0.25 * g;
  return 0.5 * g / (d * d + q * q);
}

double tba_kernel_integral(double k, double g, const MomentumGrid& grid) {
  if (!(g > 0.0)) throw DomainError("kernel normalization needs g > 0");
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sum += grid.weights[j] * folded_kernel(k, grid.nodes[j], g);
  // Lorentzian mass outside [−k_max, k_max].
  const double q = 0.25 * g;
  const double tail = (kPi - std::atan((grid.k_max - k) / q) - std::atan((grid.k_max + k) / q)) / kPi;
  return sum + tail;
}

std::vector<double> yang_yang_rhs(double g, double temperature, double mu, const MomentumGrid& grid,
                                  const std::vector<double>& epsilon, double kernel_scale) {
  check_inputs(temperature, grid);
  if (epsilon.size() != grid.size()) throw ConfigError("pseudo-energy size does not match grid");
  const double beta = 1.0 / temperature;
  const std::size_t n = grid.size();
  std::vector<double> weighted_log(n);
  for (std::size_t j = 0; j < n; ++j) weighted_log[j] = grid.weights[j] * softplus_neg(beta * epsilon[j]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = grid.nodes[i];
    double conv = 0.0;
    if (kernel_scale != 0.0) {
      for (std::size_t j = 0; j < n; ++j) conv += folded_kernel(k, grid.nodes[j], g) * weighted_log[j];
    }
    out[i] = k * k - mu - temperature * kernel_scale * conv;
  }
  return out;
}

TbaField solve_yang_yang(double g, double temperature, double mu, const MomentumGrid& grid,
                         const TbaOptions& options) {
  check_inputs(temperature, grid);
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!(g > 0.0) && options.kernel_scale != 0.0) throw DomainError("Lieb-Liniger coupling must be positive");
  const double beta = 1.0 / temperature;
  TbaField field;
  field.temperature = temperature;
  field.epsilon.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) field.epsilon[i] = grid.nodes[i] * grid.nodes[i] - mu;

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const auto rhs = yang_yang_rhs(g, temperature, mu, grid, field.epsilon, options.kernel_scale);
    double residual = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) residual = std::max(residual, beta * std::abs(rhs[i] - field.epsilon[i]));
    field.iterations = iter;
    field.residual = residual;
    if (!std::isfinite(residual)) throw NonConvergence("Yang-Yang iteration diverged", iter, residual);
    if (residual <= options.tolerance) {
      field.converged = true;
      return field;
    }
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      field.epsilon[i] += options.damping * (rhs[i] - field.epsilon[i]);
    }
  }
  throw NonConvergence("Yang-Yang iteration did not converge", field.iterations, field.residual);
}

double tba_free_energy(const TbaField& field, const MomentumGrid& grid) {
  if (field.epsilon.size() != grid.size()) throw ConfigError("pseudo-energy size does not match grid");
  const double beta = 1.0 / field.temperature;
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * softplus_neg(beta * field.epsilon[i]);
  return -field.temperature * sum;
}

double free_fermion_free_energy(double temperature, double mu, const MomentumGrid& grid) {
  check_inputs(temperature, grid);
  const double beta = 1.0 / temperature;
  return -temperature * integrate(grid, [&](double k) { return softplus_neg(beta * (k * k - mu)); });
}

LeadingOrderComparison leading_order_comparison(double g, double temperature, double mu,
                                                const MomentumGrid& grid) {
  check_inputs(temperature, grid);
  if (!(g > 0.0)) throw DomainError("Lieb-Liniger coupling must be positive");
  const double beta = 1.0 / temperature;
  const std::size_t n = grid.size();
  std::vector<double> f0(n);
  std::vector<double> log_term(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = beta * (grid.nodes[i] * grid.nodes[i] - mu);
    f0[i] = fermi(x);
    log_term[i] = softplus_neg(x);
  }

  LeadingOrderComparison out;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = grid.nodes[i];
    double shift = 0.0;
    double foam_row = 0.0;
    double even_row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double kp = grid.nodes[j];
      shift += grid.weights[j] * folded_kernel(k, kp, g) * log_term[j];
      const double d_minus = std::abs(k - kp);
      const double d_plus = k + kp;
      const double wf = grid.weights[j] * f0[j];
      foam_row += wf * 0.5 * (scattering::g2_1d_integrated_branch(g, d_minus) +
                              scattering::g2_1d_integrated_branch(g, d_plus));
      even_row += wf * 0.5 * (scattering::g2_1d(g, d_minus) + scattering::g2_1d(g, d_plus));
    }
    // F = −T∫(dk) log(1 + e^{−βε}) shifts by ∫(dk) f₀ δε at first order in K.
    out.tba_first_order += grid.weights[i] * f0[i] * (-temperature * shift);
    out.foam_first_order += -0.5 * grid.weights[i] * f0[i] * foam_row;
    out.foam_first_order_even_kernel += -0.5 * grid.weights[i] * f0[i] * even_row;
  }
  const double diff = std::abs(out.tba_first_order - out.foam_first_order);
  const double scale = std::abs(out.tba_first_order);
  out.relative_gap = diff < 1e-14 ? 0.0 : diff / scale;
  return out;
}

MomentumGrid build_tba_grid(double temperature, double mu, int n_radial) {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  // m = 1/2, so 2m = 1 in k_max = √(2m(T log(1/tol) + max(μ, 0))).
  const double k_max = std::sqrt(temperature * std::log(1e10) + std::max(mu, 0.0));
  return build_grid_on(1, 0.0, k_max, n_radial, 0);
}

}  // namespace pseudogas::tba
