#pragma once

#include <complex>
#include <functional>

#include "pseudogas/core_model.hpp"

namespace pseudogas {

/// Exact two-body data for the contact interaction g|φ|⁴/4: on-shell
/// amplitude from the ladder sum, phase-space volume 𝓘, and the kernel
/// G₂ = (−i/𝓘) log(1 + i𝓘ℳ), which depends only on |k₁ − k₂|.
namespace scattering {

/// 𝓘(|Δk|): m/|Δk| in d=1, m/4 in d=2, m|Δk|/8π in d=3.
double phase_space_volume(int dimension, double mass, double dk);

/// ℳ = −g / (1 + (mg/8π)(log(4Λ²/dk²) + iπ)). BranchError when the real
/// part of the denominator is nonpositive.
std::complex<double> amplitude_2d(double mass, double g, double uv_cutoff, double dk);
/// iℳ = −i g_R / (1 + i m g_R |Δk| / 16π).
std::complex<double> amplitude_3d(double mass, double g_renormalized, double dk);
/// iℳ = −i g / (1 + i g / 4|Δk|), with m = 1/2.
std::complex<double> amplitude_1d(double g, double dk);

/// −(8/m) arctan[(mg/8) / (1 + (mg/8π) log(4Λ²/dk²))]; the dk → 0 limit is 0.
double g2_2d(double mass, double g, double uv_cutoff, double dk);
/// −(16π/(m dk)) arctan(m g_R dk / 16π); the dk → 0 limit is −g_R.
double g2_3d(double mass, double g_renormalized, double dk);
/// −4Δ arctan(g/4Δ), even in Δ; the Δ → 0 limit is 0.
double g2_1d(double g, double dk);

/// 1/g_R = 1/g + mΛ/4π². An infinite `bare_g` is the unitary limit.
double renormalize_coupling_3d(double bare_g, double mass, double uv_cutoff);

/// Coupling at cutoff Λ from the integrated flow
/// 2π/(m g(Λ)) = (2π/(m g₀))(1 + (m g₀/4π) log(Λ₀/Λ)).
double running_coupling_2d(double g0, double mass, double lambda0, double lambda);

/// Coupling from the lowest-order step of Λ dg/dΛ = m g²/4π:
/// g(Λ) = g₀ − (m g₀²/4π) log(Λ₀/Λ). Agrees with running_coupling_2d to O(g₀²).
double running_coupling_2d_one_loop(double g0, double mass, double lambda0, double lambda);

/// Branch of −2i|Δ| log S(Δ) obtained when the Lorentzian TBA kernel is
/// integrated by parts: the phase of S is followed continuously across
/// Δ = 0, which equals g2_1d(g, Δ) + 2π|Δ| = 4|Δ| arctan(4|Δ|/g).
double g2_1d_integrated_branch(double g, double dk);

}  // namespace scattering

/// How the two-body kernel enters the integral equations.
enum class KernelMode {
  exact,     // full momentum-dependent G₂ for the dimension
  constant,  // leading weak-coupling term G₂ ≡ −g (−g_R in d=3)
};

/// On-shell amplitude for the parameters' dimension. In d=3 the bare
/// coupling is renormalized with the UV cutoff first.
std::complex<double> amplitude(const ModelParams& p, double dk);

/// Phase-space volume for the parameters' dimension and mass.
double phase_space_volume(const ModelParams& p, double dk);

/// G₂(|Δk|) in closed arctan form.
double g2_kernel(const ModelParams& p, double dk, KernelMode mode = KernelMode::exact);

/// G₂ evaluated literally as (−i/𝓘) log(1 + i𝓘ℳ) with the principal log.
double g2_kernel_log_form(const ModelParams& p, double dk);

/// Coupling that multiplies the kernel at weak coupling: g, or g_R in d=3.
double effective_coupling(const ModelParams& p);

using KernelFunction = std::function<double(double dk)>;

/// Closure over g2_kernel for the given parameters and mode.
KernelFunction make_kernel(const ModelParams& p, KernelMode mode = KernelMode::exact);

}  // namespace pseudogas
