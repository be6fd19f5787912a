#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pseudogas/core_model.hpp"
#include "pseudogas/scattering_kernels.hpp"

namespace pseudogas {

/// Gauss-Legendre rule on [−1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes ascending, computed by Newton iteration on P_n to machine precision.
GaussLegendre gauss_legendre(int n);

/// Radial momentum grid. `weights[i]` already contains the measure
/// k^{d−1} S_{d−1}/(2π)^d, so Σ w_i h(k_i) ≈ ∫ d^dk/(2π)^d h(|k|).
/// In d=1 the real line is folded onto k ≥ 0.
struct MomentumGrid {
  int dimension = 2;
  std::vector<double> nodes;
  std::vector<double> weights;
  double k_min = 0.0;
  double k_max = 0.0;
  int n_angular = 0;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct GridOptions {
  double tail_tolerance = 1e-10;  // bound on e^{−β(ω(k_max) − max(μ,0))}
  double k_max_factor = 1.0;      // c ≥ 1 in k_max = c·√(2m(T log(1/tol) + max(μ,0)))
  /// For d ≥ 2 the UV cutoff must satisfy Λ ≥ min_uv_ratio·k_max; 0 disables the check.
  double min_uv_ratio = 10.0;
};

/// Gauss-Legendre nodes mapped to [ir_cutoff, k_max].
/// ConfigError unless n_radial ≥ 16 and (d ≥ 2 ⇒ n_angular ≥ 16).
MomentumGrid build_grid(const ModelParams& p, int n_radial, int n_angular,
                        const GridOptions& options = {});

/// Same construction on an explicit interval; used when the lower limit is
/// varied independently of the parameters.
MomentumGrid build_grid_on(int dimension, double k_min, double k_max, int n_radial, int n_angular);

/// Unit-sphere area S_{d−1}: 2, 2π, 4π.
double unit_sphere_area(int dimension);

/// Σ w_i h(k_i).
template <typename F>
double integrate(const MomentumGrid& grid, F&& h) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * h(grid.nodes[i]);
  return sum;
}

/// Mean of G₂(|k − k′|) over the relative orientation of k and k′:
///   d=1: average of the values at |k − k′| and k + k′;
///   d=2: (1/π)∫₀^π dθ, with θ = π u³ so the rule clusters at θ = 0 where
///        |k − k′| can vanish (the 2D kernel varies like 1/log there);
///   d=3: ½∫₋₁¹ d(cos θ).
double angular_average(const KernelFunction& kernel, int dimension, double k, double kp,
                       int n_angular);

double angular_average(const ModelParams& p, double k, double kp, int n_angular,
                       KernelMode mode = KernelMode::exact);

/// Tabulated angular-averaged kernel Ḡ₂(k_i, k_j), row-major and symmetric.
struct KernelMatrix {
  std::size_t n = 0;
  std::vector<double> entries;
  std::uint64_t params_hash = 0;
  KernelMode mode = KernelMode::exact;

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries[i * n + j]; }
};

/// FNV-1a over the numeric fields of the parameters, the grid nodes and
/// the kernel mode. Stable across runs and platforms with IEEE doubles.
std::uint64_t params_hash(const ModelParams& p, const MomentumGrid& grid, KernelMode mode);

/// Each unordered pair is evaluated once and mirrored. A BranchError
/// carries the offending (i, j).
KernelMatrix build_kernel_matrix(const ModelParams& p, const MomentumGrid& grid,
                                 KernelMode mode = KernelMode::exact);

}  // namespace pseudogas
