#pragma once

#include <map>
#include <string>
#include <vector>

#include "pseudogas/core_model.hpp"
#include "pseudogas/quadrature_grid.hpp"
#include "pseudogas/scattering_kernels.hpp"

namespace pseudogas {

enum class CriticalMethod { closed_form, cutoff_scan, full_kernel };

const char* to_string(CriticalMethod m) noexcept;

/// Critical point of the 2D Bose gas in units of the temperature.
struct CriticalPointResult {
  double beta_mu_c = 0.0;
  double beta_eps_c = 0.0;   // β k_c²/2m, the infrared cutoff energy
  double nc_lambda2 = 0.0;   // n_c λ², λ = √(2πβ/m)
  CriticalMethod method = CriticalMethod::closed_form;
  std::map<std::string, double> diagnostics;
};

/// Root βμ < 0 of βμ = −(mg/2π) log(1 − e^{βμ}) for attractive mg < 0.
double critical_mu_attractive(double mg);

/// βμ_c = (mg/2π) log(1 + 2π/mg),
/// βε_c = (1 + mg/2π) log(1 + mg/2π) + (mg/2π) log(2π/mg),
/// n_c λ² = log(1 + 2π/mg). DomainError for mg ≤ 0.
CriticalPointResult closed_form_critical(double mg);

/// (mg/2π)[βε₀ − βμ − log(e^{β(ε₀−μ)} − 1)], the right-hand side of the
/// cutoff equation for βμ_c. DomainError for βμ ≥ βε₀.
double cutoff_rhs(double mg, double beta_eps0, double beta_mu);

/// Its βμ-derivative, (mg/2π)/(e^{β(ε₀−μ)} − 1).
double cutoff_rhs_slope(double mg, double beta_eps0, double beta_mu);

/// All solutions of βμ = cutoff_rhs(βμ) on (−∞, βε₀), ascending. Sign
/// changes are bracketed on a 10⁴-point scan in log(βε₀ − βμ) and
/// bisected; a tangential (double) root is found from the slope condition
/// RHS′ = 1. A root closer to βε₀ than one ulp is reported as the largest
/// double below βε₀; its exact location is in cutoff_root_offsets.
std::vector<double> cutoff_roots(double mg, double beta_eps0);

/// The same roots as offsets βε₀ − βμ > 0, in matching order. Offsets below
/// 1e-300 are not searched.
std::vector<double> cutoff_root_offsets(double mg, double beta_eps0);

/// cutoff_rhs written in terms of the offset y = βε₀ − βμ: −(mg/2π) log(1 − e^{−y}).
double cutoff_rhs_offset(double mg, double offset);

struct Figure1Row {
  double beta_mu;
  double lhs;
  double rhs;
};

/// (βμ, LHS = βμ, RHS) on a uniform βμ grid; DomainError if the range reaches βε₀.
std::vector<Figure1Row> figure1_curves(double mg, double beta_eps0, double beta_mu_min,
                                       double beta_mu_max, int n_points);

struct CriticalSearchOptions {
  KernelMode kernel = KernelMode::exact;
  int n_radial = 256;
  /// When true, the infrared cutoff is held at params.ir_cutoff and the
  /// smallest root of ε(0; μ) = 0 is returned. Otherwise k₀ is adjusted
  /// until that root is a double root (tangency).
  bool fixed_cutoff = false;
};

/// Linearized zero-momentum pseudo-energy with the integral restricted to
/// |k| > k₀: ε(0) = −μ − ∫_{|k|>k₀}(dk) G₂(0,k) f₀(k).
double zero_mode_pseudo_energy(const ModelParams& p, double k0, int n_radial, KernelMode mode,
                               double mu);

/// Critical point of the linearized equation with the full kernel row
/// G₂(0, k). Requires d=2 bosons with mg > 0. Diagnostics record the
/// closed-form values and relative deviations.
CriticalPointResult numeric_critical_mu(const ModelParams& p,
                                        const CriticalSearchOptions& options = {});

/// C in βμ_c ≈ (mg/2π) log(2C/mg) fitted by least squares with the slope
/// fixed at −1 to closed-form points on a log grid over [mg_min, mg_max].
double fit_comparison_constant(double mg_min = 1e-4, double mg_max = 1e-2, int n_points = 21);

}  // namespace pseudogas
