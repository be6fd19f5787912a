#pragma once

#include <span>

namespace pseudogas {

/// +1 for bosons, −1 for fermions. The integer value is the sign s that
/// appears in every filling fraction and free energy.
enum class Statistics : int { boson = 1, fermion = -1 };

constexpr double sign(Statistics s) noexcept { return static_cast<int>(s); }

/// Physical inputs in natural units (ħ = k_B = 1). Construct through
/// `ModelParams::make` or `ModelParams::dimensionless_2d`, both of which
/// validate; the aggregate members stay public for reading.
struct ModelParams {
  int dimension = 2;
  double mass = 1.0;
  double coupling = 0.0;
  double temperature = 1.0;
  double chemical_potential = 0.0;
  double uv_cutoff = 1.0;
  double ir_cutoff = 0.0;
  Statistics statistics = Statistics::boson;

  /// Throws ConfigError when an invariant fails: T > 0, m > 0,
  /// Λ > k₀ ≥ 0, d ∈ {1,2,3}, and m = 1/2 in one dimension.
  static ModelParams make(int dimension, double mass, double coupling, double temperature,
                          double chemical_potential, double uv_cutoff, double ir_cutoff = 0.0,
                          Statistics statistics = Statistics::boson);

  /// Two-dimensional gas with m = T = 1 from the dimensionless pair (mg, βμ).
  static ModelParams dimensionless_2d(double mg, double beta_mu, double uv_cutoff,
                                      double ir_cutoff = 0.0,
                                      Statistics statistics = Statistics::boson);

  void validate() const;

  double beta() const noexcept { return 1.0 / temperature; }
  double fugacity() const;
  double s() const noexcept { return sign(statistics); }

  ModelParams with_chemical_potential(double mu) const;
  ModelParams with_coupling(double g) const;
  ModelParams with_ir_cutoff(double k0) const;
};

/// ω(k) = k²/2m.
double dispersion(const ModelParams& p, double k) noexcept;

/// f₀(k) = z / (e^{βω_k} − s z). Bosons with μ ≥ 0 are rejected outright.
double free_filling(const ModelParams& p, double k);

/// s·log(1 − s z e^{−βω}) evaluated without cancellation.
double free_log_term(const ModelParams& p, double k);

/// Li₂(x) = Σ xⁿ/n² summed until a term drops below `term_cutoff`.
/// Intended for |x| ≤ e^{−0.1}; convergence elsewhere is slow.
double dilog_series(double x, double term_cutoff = 1e-12);

/// Closed form −(s m / 2πβ²) Li₂(s z) of the 2D ideal-gas free energy density.
double free_gas_free_energy_2d_closed(const ModelParams& p);

/// (s/β) ∫ d²k/(2π)² log(1 − s z e^{−βω}) by radial quadrature.
/// k_max bounds the neglected Boltzmann tail by `tail_tolerance`; QuadratureError
/// when the result moves by more than 1e-9 relative under node doubling.
double free_gas_free_energy_2d(const ModelParams& p, int n_radial = 128,
                               double tail_tolerance = 1e-10);

}  // namespace pseudogas
