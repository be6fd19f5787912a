#include "pseudogas/pseudoenergy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pseudogas/errors.hpp"

namespace pseudogas {

namespace {

constexpr double kBoseFloor = 1e-12;
constexpr int kMaxContinuationFailures = 12;

void check_consistent(const ModelParams& p, const KernelMatrix& kernel, const MomentumGrid& grid) {
  if (grid.dimension != p.dimension) throw ConfigError("grid dimension does not match parameters");
  if (kernel.n != grid.size()) throw ConfigError("kernel matrix size does not match grid");
}

// 1/(e^{x} − s) with the Bose floor enforced.
double filling_from_exponent(double x, double s) {
  if (s > 0.0) {
    const double denom = std::expm1(x);
    if (!(denom > kBoseFloor)) {
      std::ostringstream os;
      os << "Bose occupation diverges: e^{beta eps} - 1 = " << denom << " <= " << kBoseFloor;
      throw FugacityError(os.str());
    }
    return 1.0 / denom;
  }
  return 1.0 / (std::exp(x) + 1.0);
}

// f₀ on the grid; valid whenever ω(k_i) − μ keeps the Bose denominator positive.
std::vector<double> free_filling_on(const ModelParams& p, const MomentumGrid& grid) {
  std::vector<double> f0(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f0[i] = filling_from_exponent((dispersion(p, grid.nodes[i]) - p.chemical_potential) / p.temperature,
                                  p.s());
  }
  return f0;
}

bool admissible(const std::vector<double>& epsilon, const ModelParams& p) {
  if (p.statistics == Statistics::fermion) return true;
  return std::all_of(epsilon.begin(), epsilon.end(),
                     [&](double e) { return std::expm1(e / p.temperature) > kBoseFloor; });
}

}  // namespace

std::vector<double> pseudo_energy_rhs(const ModelParams& p, const KernelMatrix& kernel,
                                      const MomentumGrid& grid, std::span<const double> epsilon) {
  check_consistent(p, kernel, grid);
  if (epsilon.size() != grid.size()) throw ConfigError("field size does not match grid");
  const double beta = p.beta();
  const double s = p.s();
  const std::size_t n = grid.size();

  // w_j f̃_j with f̃ = e^{−β(ω−μ)} / (1 − s e^{−βε}) = e^{β(ε−ω+μ)} / (e^{βε} − s).
  std::vector<double> weighted(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = beta * epsilon[j];
    if (s > 0.0 && !(std::expm1(x) > kBoseFloor)) {
      std::ostringstream os;
      os << "Bose occupation diverges at k = " << grid.nodes[j] << " (beta eps = " << x << ")";
      throw FugacityError(os.str());
    }
    const double boltzmann = std::exp(-beta * (dispersion(p, grid.nodes[j]) - p.chemical_potential));
    const double denom = s > 0.0 ? -std::expm1(-x) : 1.0 + std::exp(-x);
    weighted[j] = grid.weights[j] * boltzmann / denom;
  }

  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double conv = 0.0;
    const double* row = kernel.entries.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) conv += row[j] * weighted[j];
    const double arg = 1.0 + beta * conv;
    if (!(arg > 0.0)) {
      std::ostringstream os;
      os << "pseudo-energy log argument nonpositive (" << arg << ") at k = " << grid.nodes[i]
         << "; two-body approximation breaks down near condensation";
      throw DomainError(os.str());
    }
    rhs[i] = dispersion(p, grid.nodes[i]) - p.chemical_potential - std::log(arg) / beta;
  }
  return rhs;
}

namespace {

PseudoEnergyField iterate(const ModelParams& p, const KernelMatrix& kernel, const MomentumGrid& grid,
                          const SolverOptions& options, std::vector<double> epsilon) {
  if (!admissible(epsilon, p)) {
    throw FugacityError("initial pseudo-energy puts a Bose occupation at or past divergence");
  }
  const std::size_t n = grid.size();
  const double beta = p.beta();
  PseudoEnergyField field;
  field.epsilon = std::move(epsilon);
  std::vector<double> candidate(n);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const std::vector<double> rhs = pseudo_energy_rhs(p, kernel, grid, field.epsilon);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, beta * std::abs(rhs[i] - field.epsilon[i]));
    field.iterations = iter;
    field.residual = residual;
    if (residual <= options.tolerance) {
      field.converged = true;
      return field;
    }
    // Shrink the step while it would cross the Bose pole.
    double alpha = options.damping;
    for (int halving = 0;; ++halving) {
      for (std::size_t i = 0; i < n; ++i) candidate[i] = (1.0 - alpha) * field.epsilon[i] + alpha * rhs[i];
      if (admissible(candidate, p)) break;
      if (halving == 40) throw FugacityError("damped update cannot keep the Bose occupation finite");
      alpha *= 0.5;
    }
    field.epsilon.swap(candidate);
  }
  std::ostringstream os;
  os << "pseudo-energy iteration did not converge in " << options.max_iter
     << " iterations (residual " << field.residual << ")";
  throw NonConvergence(os.str(), field.iterations, field.residual);
}

std::vector<double> free_field(const ModelParams& p, const MomentumGrid& grid) {
  std::vector<double> e(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) e[i] = dispersion(p, grid.nodes[i]) - p.chemical_potential;
  return e;
}

// Bosons whose free start ω − μ already crosses the pole are reached by
// stepping μ up from a value where it does not, reusing each solution.
PseudoEnergyField continue_in_mu(const ModelParams& p, const KernelMatrix& kernel, const MomentumGrid& grid,
                                 const SolverOptions& options) {
  const double k_lo = *std::min_element(grid.nodes.begin(), grid.nodes.end());
  double mu = dispersion(p, k_lo) - p.temperature;
  ModelParams q = p;
  q.chemical_potential = mu;
  PseudoEnergyField field = iterate(q, kernel, grid, options, free_field(q, grid));
  int total = field.iterations;
  int failures = 0;
  double step = (p.chemical_potential - mu) / 8.0;
  while (mu < p.chemical_potential) {
    const double next = std::min(mu + step, p.chemical_potential);
    q.chemical_potential = next;
    try {
      PseudoEnergyField trial = iterate(q, kernel, grid, options, field.epsilon);
      total += trial.iterations;
      field = std::move(trial);
      mu = next;
      step *= 1.5;
    } catch (const Error&) {
      step *= 0.5;
      if (++failures == kMaxContinuationFailures) throw;
    }
  }
  field.iterations = total;
  return field;
}

}  // namespace

PseudoEnergyField solve_pseudo_energy(const ModelParams& p, const KernelMatrix& kernel,
                                      const MomentumGrid& grid, const SolverOptions& options,
                                      std::optional<std::vector<double>> initial) {
  check_consistent(p, kernel, grid);
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!(options.tolerance >= 1e-12)) throw ConfigError("tolerance must be >= 1e-12");
  if (options.max_iter < 1) throw ConfigError("max_iter must be positive");

  if (initial) {
    if (initial->size() != grid.size()) throw ConfigError("initial field size does not match grid");
    return iterate(p, kernel, grid, options, std::move(*initial));
  }
  std::vector<double> start = free_field(p, grid);
  if (!admissible(start, p)) return continue_in_mu(p, kernel, grid, options);
  return iterate(p, kernel, grid, options, std::move(start));
}

PseudoEnergyField solve_linearized(const ModelParams& p, const KernelMatrix& kernel,
                                   const MomentumGrid& grid) {
  check_consistent(p, kernel, grid);
  if (p.statistics != Statistics::boson) throw ConfigError("linearized equation is defined for bosons");
  const std::vector<double> f0 = free_filling_on(p, grid);
  const std::size_t n = grid.size();
  PseudoEnergyField field;
  field.epsilon.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double conv = 0.0;
    for (std::size_t j = 0; j < n; ++j) conv += kernel(i, j) * grid.weights[j] * f0[j];
    field.epsilon[i] = dispersion(p, grid.nodes[i]) - p.chemical_potential - conv;
  }
  field.iterations = 1;
  field.residual = 0.0;
  field.converged = true;
  return field;
}

Observables observables(const ModelParams& p, const MomentumGrid& grid, const PseudoEnergyField& field) {
  if (!field.converged) throw ConfigError("observables need a converged pseudo-energy field");
  if (field.epsilon.size() != grid.size()) throw ConfigError("field size does not match grid");
  const double beta = p.beta();
  const double s = p.s();
  const std::size_t n = grid.size();
  Observables obs;
  obs.filling.resize(n);
  obs.dressed_filling.resize(n);
  obs.free_filling = free_filling_on(p, grid);
  double bracket = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = field.epsilon[i];
    const double f = filling_from_exponent(beta * eps, s);
    const double shift = beta * (eps - dispersion(p, grid.nodes[i]) + p.chemical_potential);
    obs.filling[i] = f;
    obs.dressed_filling[i] = std::exp(shift) * f;
    const double f0 = obs.free_filling[i];
    obs.density += grid.weights[i] * f;
    bracket += grid.weights[i] * (s * std::log1p(s * f) - 0.5 * (f - f0) / (1.0 + s * f0));
  }
  obs.free_energy = -bracket / beta;
  return obs;
}

double free_gas_free_energy(const ModelParams& p, const MomentumGrid& grid) {
  if (grid.dimension != p.dimension) throw ConfigError("grid dimension does not match parameters");
  return integrate(grid, [&](double k) { return free_log_term(p, k); }) * p.temperature;
}

double free_density(const ModelParams& p, const MomentumGrid& grid) {
  if (grid.dimension != p.dimension) throw ConfigError("grid dimension does not match parameters");
  return integrate(grid, [&](double k) { return free_filling(p, k); });
}

}  // namespace pseudogas
