#include "pseudogas/quadrature_grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "pseudogas/errors.hpp"

namespace pseudogas {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double unit_sphere_area(int dimension) {
  switch (dimension) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    case 3:
      return 4.0 * kPi;
    default:
      throw ConfigError("dimension must be 1, 2 or 3");
  }
}

MomentumGrid build_grid_on(int dimension, double k_min, double k_max, int n_radial, int n_angular) {
  if (n_radial < 16) throw ConfigError("n_radial must be >= 16");
  if (dimension >= 2 && n_angular < 16) throw ConfigError("n_angular must be >= 16 for d >= 2");
  if (!(k_max > k_min) || !(k_min >= 0.0)) throw ConfigError("grid interval must satisfy 0 <= k_min < k_max");
  const GaussLegendre rule = gauss_legendre(n_radial);
  const double half = 0.5 * (k_max - k_min);
  const double measure = unit_sphere_area(dimension) / std::pow(2.0 * kPi, dimension);

  MomentumGrid grid;
  grid.dimension = dimension;
  grid.k_min = k_min;
  grid.k_max = k_max;
  grid.n_angular = n_angular;
  grid.nodes.resize(n_radial);
  grid.weights.resize(n_radial);
  for (int i = 0; i < n_radial; ++i) {
    const double k = k_min + half * (rule.nodes[i] + 1.0);
    grid.nodes[i] = k;
    grid.weights[i] = half * rule.weights[i] * std::pow(k, dimension - 1) * measure;
  }
  return grid;
}

MomentumGrid build_grid(const ModelParams& p, int n_radial, int n_angular, const GridOptions& options) {
  p.validate();
  if (!(options.tail_tolerance > 0.0 && options.tail_tolerance < 1.0))
    throw ConfigError("tail_tolerance must lie in (0, 1)");
  if (options.k_max_factor < 1.0) throw ConfigError("k_max_factor must be >= 1");
  const double energy =
      p.temperature * std::log(1.0 / options.tail_tolerance) + std::max(p.chemical_potential, 0.0);
  const double k_max = std::max(options.k_max_factor * std::sqrt(2.0 * p.mass * energy),
                                p.ir_cutoff + 1e-12);
  if (!(k_max > p.ir_cutoff)) throw ConfigError("ir_cutoff lies beyond the thermal grid range");
  if (p.dimension >= 2 && options.min_uv_ratio > 0.0 && p.uv_cutoff < options.min_uv_ratio * k_max) {
    std::ostringstream os;
    os << "uv_cutoff " << p.uv_cutoff << " is below " << options.min_uv_ratio << " * k_max = "
       << options.min_uv_ratio * k_max;
    throw ConfigError(os.str());
  }
  return build_grid_on(p.dimension, p.ir_cutoff, k_max, n_radial, n_angular);
}

namespace {

double average_with_rule(const KernelFunction& kernel, int dimension, double k, double kp,
                         const GaussLegendre& rule) {
  if (!(k >= 0.0) || !(kp >= 0.0)) throw DomainError("angular_average needs nonnegative momenta");
  if (dimension == 1) return 0.5 * (kernel(std::abs(k - kp)) + kernel(k + kp));
  if (k == 0.0 || kp == 0.0) return kernel(std::max(k, kp));
  const double diff2 = (k - kp) * (k - kp);
  const std::size_t n = rule.nodes.size();
  double sum = 0.0;
  if (dimension == 2) {
    for (std::size_t a = 0; a < n; ++a) {
      const double u = 0.5 * (rule.nodes[a] + 1.0);
      const double theta = kPi * u * u * u;
      const double jac = 0.5 * rule.weights[a] * 3.0 * u * u;  // dθ/π
      const double sh = std::sin(0.5 * theta);
      sum += jac * kernel(std::sqrt(diff2 + 4.0 * k * kp * sh * sh));
    }
    return sum;
  }
  // d = 3: c = cos θ, |k − k′|² = (k − k′)² + 2kk′(1 − c).
  for (std::size_t a = 0; a < n; ++a) {
    const double c = rule.nodes[a];
    sum += 0.5 * rule.weights[a] * kernel(std::sqrt(diff2 + 2.0 * k * kp * (1.0 - c)));
  }
  return sum;
}

}  // namespace

double angular_average(const KernelFunction& kernel, int dimension, double k, double kp, int n_angular) {
  if (dimension != 1 && n_angular < 1) throw ConfigError("n_angular must be positive");
  const GaussLegendre rule = dimension == 1 ? GaussLegendre{} : gauss_legendre(n_angular);
  return average_with_rule(kernel, dimension, k, kp, rule);
}

double angular_average(const ModelParams& p, double k, double kp, int n_angular, KernelMode mode) {
  return angular_average(make_kernel(p, mode), p.dimension, k, kp, n_angular);
}

namespace {

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
}

void fnv_mix(std::uint64_t& h, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  fnv_mix(h, &bits, sizeof bits);
}

void fnv_mix(std::uint64_t& h, std::int64_t v) { fnv_mix(h, &v, sizeof v); }

}  // namespace

std::uint64_t params_hash(const ModelParams& p, const MomentumGrid& grid, KernelMode mode) {
  std::uint64_t h = 14695981039346656037ULL;
  fnv_mix(h, static_cast<std::int64_t>(p.dimension));
  fnv_mix(h, p.mass);
  fnv_mix(h, p.coupling);
  fnv_mix(h, p.temperature);
  fnv_mix(h, p.chemical_potential);
  fnv_mix(h, p.uv_cutoff);
  fnv_mix(h, p.ir_cutoff);
  fnv_mix(h, static_cast<std::int64_t>(p.statistics));
  fnv_mix(h, static_cast<std::int64_t>(mode));
  fnv_mix(h, static_cast<std::int64_t>(grid.n_angular));
  for (double k : grid.nodes) fnv_mix(h, k);
  return h;
}

KernelMatrix build_kernel_matrix(const ModelParams& p, const MomentumGrid& grid, KernelMode mode) {
  if (grid.dimension != p.dimension) throw ConfigError("grid dimension does not match parameters");
  const KernelFunction kernel = make_kernel(p, mode);
  const GaussLegendre rule = p.dimension == 1 ? GaussLegendre{} : gauss_legendre(grid.n_angular);
  KernelMatrix m;
  m.n = grid.size();
  m.mode = mode;
  m.params_hash = params_hash(p, grid, mode);
  m.entries.assign(m.n * m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i; j < m.n; ++j) {
      double value = 0.0;
      try {
        value = average_with_rule(kernel, p.dimension, grid.nodes[i], grid.nodes[j], rule);
      } catch (const BranchError& e) {
        std::ostringstream os;
        os << e.what() << " at kernel entry (" << i << ", " << j << ")";
        throw BranchError(os.str(), static_cast<int>(i), static_cast<int>(j));
      }
      m.entries[i * m.n + j] = value;
      m.entries[j * m.n + i] = value;
    }
  }
  return m;
}

}  // namespace pseudogas
