#pragma once

#include <vector>

#include "pseudogas/quadrature_grid.hpp"

namespace pseudogas::tba {

/// Yang-Yang pseudo-energy of the Lieb-Liniger gas (m = 1/2, ω = k²) on a
/// folded d=1 grid.
struct TbaField {
  std::vector<double> epsilon;
  double temperature = 1.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// K(k,k′) = (g/2)/((k−k′)² + (g/4)²) = −i∂_k log S.
double tba_kernel(double k, double kp, double g);

/// ∫(dk′) K(k,k′) over the grid plus the analytic contribution of |k′| > k_max;
/// equals 1 up to quadrature error since (dk′) = dk′/2π.
double tba_kernel_integral(double k, double g, const MomentumGrid& grid);

struct TbaOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iter = 10000;
  /// Multiplies K; 0 switches the interaction off (test hook).
  double kernel_scale = 1.0;
};

/// Right-hand side k² − μ − (1/β)∫(dk′) K log(1 + e^{−βε′}).
std::vector<double> yang_yang_rhs(double g, double temperature, double mu,
                                  const MomentumGrid& grid, const std::vector<double>& epsilon,
                                  double kernel_scale = 1.0);

/// Damped fixed point started at ε⁰ = k² − μ. Throws NonConvergence.
TbaField solve_yang_yang(double g, double temperature, double mu, const MomentumGrid& grid,
                         const TbaOptions& options = {});

/// F = −(1/β)∫(dk) log(1 + e^{−βε}).
double tba_free_energy(const TbaField& field, const MomentumGrid& grid);

/// Free-fermion value −(1/β)∫(dk) log(1 + e^{−β(k²−μ)}).
double free_fermion_free_energy(double temperature, double mu, const MomentumGrid& grid);

struct LeadingOrderComparison {
  double tba_first_order = 0.0;
  double foam_first_order = 0.0;
  double relative_gap = 0.0;
  /// −½∫∫ f₀f₀′ G₂ with the even principal-branch kernel, for reference.
  double foam_first_order_even_kernel = 0.0;
};

/// First-order term of the TBA free energy in K against the N=1 ring term
/// −½∫(dk)(dk′) f₀ f₀′ G₂ of the two-body expansion, with fermionic f₀ and
/// G₂ on the branch produced by integrating K by parts.
LeadingOrderComparison leading_order_comparison(double g, double temperature, double mu,
                                                const MomentumGrid& grid);

/// Folded d=1 grid for the Lieb-Liniger convention m = 1/2.
MomentumGrid build_tba_grid(double temperature, double mu, int n_radial);

}  // namespace pseudogas::tba
