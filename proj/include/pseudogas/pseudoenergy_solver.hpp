#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pseudogas/core_model.hpp"
#include "pseudogas/quadrature_grid.hpp"

namespace pseudogas {

/// ε(k_i) on a momentum grid together with how it was obtained.
struct PseudoEnergyField {
  std::vector<double> epsilon;
  int iterations = 0;
  double residual = 0.0;  // max_i β|Δε_i| of the last update
  bool converged = false;
};

struct SolverOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iter = 10000;
};

/// Right-hand side of the self-consistent pseudo-energy equation,
///   ε(k) = ω − μ − (1/β) log(1 + β ∫(dk′) Ḡ₂(k,k′) e^{β(ε′−ω′+μ)} / (e^{βε′} − s)),
/// evaluated at the supplied field.
/// DomainError when a log argument is nonpositive; FugacityError when
/// e^{βε′} − s ≤ 1e-12 for bosons.
std::vector<double> pseudo_energy_rhs(const ModelParams& p, const KernelMatrix& kernel,
                                      const MomentumGrid& grid, std::span<const double> epsilon);

/// Damped Picard iteration ε ← (1−α)ε + α·RHS(ε) from ε⁰ = ω − μ (or `initial`).
/// For bosons with ω − μ ≤ 0 on the grid the start is instead a solution at
/// μ′ = ω(k₁) − T, followed by μ-continuation up to the target.
/// Throws NonConvergence when `max_iter` updates do not bring the residual
/// under `tolerance`.
PseudoEnergyField solve_pseudo_energy(const ModelParams& p, const KernelMatrix& kernel,
                                      const MomentumGrid& grid, const SolverOptions& options = {},
                                      std::optional<std::vector<double>> initial = std::nullopt);

/// One explicit evaluation ε = ω − μ − ∫(dk′) Ḡ₂ f₀′ (bosons only).
PseudoEnergyField solve_linearized(const ModelParams& p, const KernelMatrix& kernel,
                                   const MomentumGrid& grid);

struct Observables {
  double density = 0.0;
  double free_energy = 0.0;
  std::vector<double> filling;
  std::vector<double> dressed_filling;
  std::vector<double> free_filling;
};

/// f = 1/(e^{βε} − s), f̃ = e^{β(ε−ω+μ)} f, n = ∫(dk) f and the two-body
/// free energy −(1/β)∫(dk)[s log(1 + s f) − ½ (f − f₀)/(1 + s f₀)].
/// ConfigError for an unconverged field.
Observables observables(const ModelParams& p, const MomentumGrid& grid,
                        const PseudoEnergyField& field);

/// (s/β)∫(dk) log(1 − s z e^{−βω}) on the grid, any dimension.
double free_gas_free_energy(const ModelParams& p, const MomentumGrid& grid);

/// ∫(dk) f₀ on the grid.
double free_density(const ModelParams& p, const MomentumGrid& grid);

}  // namespace pseudogas
