#include "pseudogas/scattering_kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pseudogas/errors.hpp"

namespace pseudogas {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1 + (mg/8π) log(4Λ²/dk²); +∞ at dk = 0 when g > 0.
double denominator_2d(double mass, double g, double uv_cutoff, double dk) {
  const double a = mass * g / (8.0 * kPi);
  if (a == 0.0) return 1.0;
  if (dk == 0.0) return a > 0.0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
  return 1.0 + a * 2.0 * std::log(2.0 * uv_cutoff / dk);
}

void check_branch(double denom, double dk) {
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "2D kernel denominator " << denom << " <= 0 at dk = " << dk
       << " (attractive bound-state region)";
    throw BranchError(os.str());
  }
}

void check_dk(double dk) {
  if (!(dk >= 0.0) || !std::isfinite(dk)) throw DomainError("momentum difference must be finite and >= 0");
}

// One-dimensional quantities depend on the signed difference only through |Δ|.
double magnitude_1d(double dk) {
  if (!std::isfinite(dk)) throw DomainError("momentum difference must be finite");
  return std::abs(dk);
}

}  // namespace

namespace scattering {

double phase_space_volume(int dimension, double mass, double dk) {
  if (dimension == 1) dk = magnitude_1d(dk);
  check_dk(dk);
  switch (dimension) {
    case 1:
      if (dk == 0.0) throw DomainError("1D phase-space volume diverges at zero momentum difference");
      return mass / dk;
    case 2:
      return mass / 4.0;
    case 3:
      if (dk == 0.0) throw DomainError("3D phase-space volume vanishes at zero momentum difference");
      return mass * dk / (8.0 * kPi);
    default:
      throw ConfigError("dimension must be 1, 2 or 3");
  }
}

std::complex<double> amplitude_2d(double mass, double g, double uv_cutoff, double dk) {
  check_dk(dk);
  if (g == 0.0) return {0.0, 0.0};
  const double re = denominator_2d(mass, g, uv_cutoff, dk);
  check_branch(re, dk);
  if (std::isinf(re)) return {0.0, 0.0};
  return -g / std::complex<double>(re, mass * g / 8.0);
}

std::complex<double> amplitude_3d(double mass, double g_renormalized, double dk) {
  check_dk(dk);
  const std::complex<double> i_m =
      std::complex<double>(0.0, -g_renormalized) /
      std::complex<double>(1.0, mass * g_renormalized * dk / (16.0 * kPi));
  return i_m / std::complex<double>(0.0, 1.0);
}

std::complex<double> amplitude_1d(double g, double dk) {
  dk = magnitude_1d(dk);
  if (dk == 0.0) return {0.0, 0.0};
  const std::complex<double> i_m =
      std::complex<double>(0.0, -g) / std::complex<double>(1.0, g / (4.0 * dk));
  return i_m / std::complex<double>(0.0, 1.0);
}

double g2_2d(double mass, double g, double uv_cutoff, double dk) {
  check_dk(dk);
  if (g == 0.0) return 0.0;
  const double denom = denominator_2d(mass, g, uv_cutoff, dk);
  check_branch(denom, dk);
  if (std::isinf(denom)) return -0.0;
  return -(8.0 / mass) * std::atan((mass * g / 8.0) / denom);
}

double g2_3d(double mass, double g_renormalized, double dk) {
  check_dk(dk);
  const double b = mass * g_renormalized / (16.0 * kPi);
  if (b == 0.0) return 0.0;
  if (dk == 0.0) return -g_renormalized;
  return -(16.0 * kPi / (mass * dk)) * std::atan(b * dk);
}

double g2_1d(double g, double dk) {
  dk = magnitude_1d(dk);
  if (g == 0.0 || dk == 0.0) return 0.0;
  return -4.0 * dk * std::atan(g / (4.0 * dk));
}

double g2_1d_integrated_branch(double g, double dk) {
  dk = magnitude_1d(dk);
  if (g == 0.0) return 2.0 * kPi * dk;
  return 4.0 * dk * std::atan(4.0 * dk / g);
}

double renormalize_coupling_3d(double bare_g, double mass, double uv_cutoff) {
  const double inv = (std::isinf(bare_g) ? 0.0 : 1.0 / bare_g) + mass * uv_cutoff / (4.0 * kPi * kPi);
  if (inv == 0.0) throw DomainError("renormalized 3D coupling diverges (1/g + mΛ/4π² = 0)");
  return 1.0 / inv;
}

double running_coupling_2d(double g0, double mass, double lambda0, double lambda) {
  if (!(lambda > 0.0) || !(lambda0 > 0.0)) throw DomainError("running coupling needs positive cutoffs");
  if (g0 == 0.0) return 0.0;
  const double factor = 1.0 + (mass * g0 / (4.0 * kPi)) * std::log(lambda0 / lambda);
  if (!(factor > 0.0)) throw DomainError("running coupling crosses its Landau scale");
  return g0 / factor;
}

double running_coupling_2d_one_loop(double g0, double mass, double lambda0, double lambda) {
  if (!(lambda > 0.0) || !(lambda0 > 0.0)) throw DomainError("running coupling needs positive cutoffs");
  return g0 - (mass * g0 * g0 / (4.0 * kPi)) * std::log(lambda0 / lambda);
}

}  // namespace scattering

double effective_coupling(const ModelParams& p) {
  if (p.dimension == 3) return scattering::renormalize_coupling_3d(p.coupling, p.mass, p.uv_cutoff);
  return p.coupling;
}

std::complex<double> amplitude(const ModelParams& p, double dk) {
  switch (p.dimension) {
    case 1:
      return scattering::amplitude_1d(p.coupling, dk);
    case 2:
      return scattering::amplitude_2d(p.mass, p.coupling, p.uv_cutoff, dk);
    default:
      return scattering::amplitude_3d(p.mass, effective_coupling(p), dk);
  }
}

double phase_space_volume(const ModelParams& p, double dk) {
  return scattering::phase_space_volume(p.dimension, p.mass, dk);
}

double g2_kernel(const ModelParams& p, double dk, KernelMode mode) {
  if (mode == KernelMode::constant) {
    check_dk(dk);
    return -effective_coupling(p);
  }
  switch (p.dimension) {
    case 1:
      return scattering::g2_1d(p.coupling, dk);
    case 2:
      return scattering::g2_2d(p.mass, p.coupling, p.uv_cutoff, dk);
    default:
      return scattering::g2_3d(p.mass, effective_coupling(p), dk);
  }
}

double g2_kernel_log_form(const ModelParams& p, double dk) {
  const double volume = phase_space_volume(p, dk);
  const std::complex<double> m = amplitude(p, dk);
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> s = 1.0 + i * volume * m;
  return std::real(-i / volume * std::log(s));
}

KernelFunction make_kernel(const ModelParams& p, KernelMode mode) {
  if (mode == KernelMode::constant) {
    const double value = -effective_coupling(p);
    return [value](double) { return value; };
  }
  switch (p.dimension) {
    case 1:
      return [g = p.coupling](double dk) { return scattering::g2_1d(g, dk); };
    case 2:
      return [m = p.mass, g = p.coupling, cut = p.uv_cutoff](double dk) {
        return scattering::g2_2d(m, g, cut, dk);
      };
    default:
      return [m = p.mass, g = effective_coupling(p)](double dk) { return scattering::g2_3d(m, g, dk); };
  }
}

}  // namespace pseudogas
