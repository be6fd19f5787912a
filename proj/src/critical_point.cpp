#include "pseudogas/critical_point.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "pseudogas/errors.hpp"

namespace pseudogas {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kScanPoints = 10000;
constexpr double kTangencyTolerance = 1e-10;
constexpr double kSmallestOffset = 1e-300;

// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

const char* to_string(CriticalMethod m) noexcept {
  switch (m) {
    case CriticalMethod::closed_form:
      return "closed_form";
    case CriticalMethod::cutoff_scan:
      return "cutoff_scan";
    case CriticalMethod::full_kernel:
      return "full_kernel";
  }
  return "unknown";
}

double critical_mu_attractive(double mg) {
  if (!(mg < 0.0)) throw DomainError("attractive critical point needs mg < 0");
  const double a = mg / (2.0 * kPi);
  // h(x) = x + a log(1 − e^x): → −∞ as x → −∞, → +∞ as x → 0⁻.
  auto h = [a](double x) { return x + a * std::log(-std::expm1(x)); };
  double hi = -1e-300;
  double lo = -1.0;
  while (h(lo) >= 0.0) {
    lo *= 2.0;
    if (lo < -1e6) throw NoRoot("attractive critical equation: no bracket found");
  }
  if (!(h(hi) > 0.0)) throw NoRoot("attractive critical equation: no bracket found");
  double h_lo = h(lo);
  for (int iter = 0; iter < 4000; ++iter) {
    // Geometric steps while the bracket spans many decades near 0⁻.
    const double mid = (lo / hi > 4.0) ? -std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double h_mid = h(mid);
    if (h_mid == 0.0) return mid;
    if ((h_mid > 0.0) == (h_lo > 0.0)) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * std::abs(hi)) break;
  }
  return 0.5 * (lo + hi);
}

CriticalPointResult closed_form_critical(double mg) {
  if (!(mg > 0.0) || !std::isfinite(mg)) throw DomainError("closed-form critical point needs mg > 0");
  const double a = mg / (2.0 * kPi);
  CriticalPointResult r;
  r.method = CriticalMethod::closed_form;
  r.beta_mu_c = a * std::log1p(1.0 / a);
  r.beta_eps_c = (1.0 + a) * std::log1p(a) + a * std::log(1.0 / a);
  r.nc_lambda2 = std::log1p(1.0 / a);
  r.diagnostics["mg"] = mg;
  r.diagnostics["tangency_residual"] = std::abs(r.beta_eps_c - r.beta_mu_c - std::log1p(a));
  return r;
}

double cutoff_rhs(double mg, double beta_eps0, double beta_mu) {
  const double y = beta_eps0 - beta_mu;
  if (!(y > 0.0)) {
    std::ostringstream os;
    os << "cutoff equation undefined: e^{beta(eps0 - mu)} <= 1 at beta mu = " << beta_mu;
    throw DomainError(os.str());
  }
  // βε₀ − βμ − log(e^{y} − 1) = −log(1 − e^{−y})
  return -(mg / (2.0 * kPi)) * std::log(-std::expm1(-y));
}

double cutoff_rhs_slope(double mg, double beta_eps0, double beta_mu) {
  const double y = beta_eps0 - beta_mu;
  if (!(y > 0.0)) throw DomainError("cutoff equation slope undefined at or beyond beta eps0");
  return (mg / (2.0 * kPi)) / std::expm1(y);
}

double cutoff_rhs_offset(double mg, double offset) {
  if (!(offset > 0.0)) throw DomainError("cutoff equation undefined: e^{beta(eps0 - mu)} <= 1");
  return -(mg / (2.0 * kPi)) * std::log(-std::expm1(-offset));
}

std::vector<double> cutoff_root_offsets(double mg, double beta_eps0) {
  if (!(mg > 0.0)) throw DomainError("cutoff_roots needs mg > 0");
  if (!(beta_eps0 > 0.0)) throw DomainError("cutoff_roots needs beta eps0 > 0");
  // In t = log(βε₀ − βμ) both the root near βμ = 0 and the one pressed
  // against βε₀ (offset ~ e^{−2πβε₀/mg}) are resolved.
  auto h = [&](double t) {
    const double y = std::exp(t);
    return cutoff_rhs_offset(mg, y) - (beta_eps0 - y);
  };
  const double t_lo = std::log(kSmallestOffset);
  const double t_hi = std::log(beta_eps0);
  const double step = (t_hi - t_lo) / (kScanPoints - 1);

  std::vector<double> ts;
  double t_prev = t_lo;
  double h_prev = h(t_prev);
  if (h_prev == 0.0) ts.push_back(t_prev);
  for (int i = 1; i < kScanPoints; ++i) {
    const double t = i == kScanPoints - 1 ? t_hi : t_lo + i * step;
    const double ht = h(t);
    if (ht == 0.0) {
      ts.push_back(t);
    } else if (h_prev != 0.0 && (ht > 0.0) != (h_prev > 0.0)) {
      ts.push_back(bisect(h, t_prev, t, h_prev));
    }
    t_prev = t;
    h_prev = ht;
  }

  // h is convex in βμ with its minimum where RHS′ = 1, i.e. at offset log(1 + mg/2π).
  // A tangential root, or a pair inside one scan cell, is invisible to the scan.
  if (ts.size() < 2) {
    const double y_star = std::log1p(mg / (2.0 * kPi));
    if (y_star < beta_eps0) {
      const double t_star = std::log(y_star);
      const double h_star = h(t_star);
      const bool near_known =
          std::any_of(ts.begin(), ts.end(), [&](double t) { return std::abs(t - t_star) < 2.0 * step; });
      if (std::abs(h_star) <= kTangencyTolerance) {
        if (!near_known) ts.push_back(t_star);
      } else if (h_star < 0.0 && ts.empty()) {
        const double lo = std::max(t_lo, t_star - step);
        const double hi = std::min(t_hi, t_star + step);
        ts.push_back(bisect(h, lo, t_star, h(lo)));
        ts.push_back(bisect(h, t_star, hi, h_star));
      }
    }
  }
  std::vector<double> offsets;
  for (double t : ts) offsets.push_back(std::exp(t));
  std::sort(offsets.begin(), offsets.end(), std::greater<>());
  return offsets;
}

std::vector<double> cutoff_roots(double mg, double beta_eps0) {
  std::vector<double> roots;
  for (double y : cutoff_root_offsets(mg, beta_eps0)) {
    const double x = beta_eps0 - y;
    roots.push_back(x < beta_eps0 ? x : std::nextafter(beta_eps0, -1.0));
  }
  return roots;
}

std::vector<Figure1Row> figure1_curves(double mg, double beta_eps0, double beta_mu_min,
                                       double beta_mu_max, int n_points) {
  if (n_points < 2) throw ConfigError("figure1 needs n_points >= 2");
  if (!(beta_mu_max > beta_mu_min)) throw ConfigError("figure1 needs mu_max > mu_min");
  std::vector<Figure1Row> rows;
  rows.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double x = beta_mu_min + (beta_mu_max - beta_mu_min) * i / (n_points - 1);
    rows.push_back({x, x, cutoff_rhs(mg, beta_eps0, x)});
  }
  return rows;
}

namespace {

struct ZeroMode {
  double value;  // ε(0)
  double slope;  // ∂ε(0)/∂μ
};

// ε(0) = −μ − (m/2π)∫_{ε₀}^{∞} dω G₂(0, k(ω)) f₀(ω), integrated in s = log(ω − μ)
// so the near-pole behaviour f₀ ≈ T/(ω − μ) close to criticality is smooth.
ZeroMode zero_mode(const ModelParams& p, const KernelFunction& kernel, const GaussLegendre& rule,
                   double k0, double mu) {
  const double beta = p.beta();
  const double eps0 = k0 * k0 / (2.0 * p.mass);
  const double gap = eps0 - mu;
  if (!(gap > 0.0)) throw FugacityError("chemical potential reaches the infrared cutoff energy");
  const double s_lo = std::log(gap);
  const double s_hi = std::log(gap + 40.0 * p.temperature);
  const double half = 0.5 * (s_hi - s_lo);
  double integral = 0.0;
  double derivative = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = s_lo + half * (rule.nodes[i] + 1.0);
    const double x = std::exp(s);  // ω − μ
    const double omega = x + mu;
    const double k = std::sqrt(2.0 * p.mass * omega);
    const double f0 = 1.0 / std::expm1(beta * x);
    const double g2 = kernel(k);
    const double w = half * rule.weights[i] * x;  // dω = x ds
    integral += w * g2 * f0;
    derivative += w * g2 * beta * f0 * (1.0 + f0);
  }
  const double measure = p.mass / (2.0 * kPi);
  return {-mu - measure * integral, -1.0 - measure * derivative};
}

// Minimiser of the convex function μ ↦ ε(0; μ) on (−∞, ε₀), from the slope sign.
double argmin_mu(const ModelParams& p, const KernelFunction& kernel, const GaussLegendre& rule, double k0) {
  const double eps0 = k0 * k0 / (2.0 * p.mass);
  double lo = eps0 - p.temperature;
  while (zero_mode(p, kernel, rule, k0, lo).slope >= 0.0) {
    lo -= 2.0 * (eps0 - lo);
    if (eps0 - lo > 1e4 * p.temperature) throw NoRoot("zero-mode pseudo-energy has no minimum");
  }
  double hi = eps0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (zero_mode(p, kernel, rule, k0, mid).slope < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

void require_2d_boson(const ModelParams& p) {
  if (p.dimension != 2) throw ConfigError("critical point search is defined in two dimensions");
  if (p.statistics != Statistics::boson) throw ConfigError("critical point search needs bosons");
  if (!(p.mass * p.coupling > 0.0)) throw DomainError("critical point search needs repulsive mg > 0");
}

}  // namespace

double zero_mode_pseudo_energy(const ModelParams& p, double k0, int n_radial, KernelMode mode, double mu) {
  require_2d_boson(p);
  return zero_mode(p, make_kernel(p, mode), gauss_legendre(n_radial), k0, mu).value;
}

CriticalPointResult numeric_critical_mu(const ModelParams& p, const CriticalSearchOptions& options) {
  require_2d_boson(p);
  if (options.n_radial < 16) throw ConfigError("n_radial must be >= 16");
  const double mg = p.mass * p.coupling;
  const CriticalPointResult closed = closed_form_critical(mg);
  const KernelFunction kernel = make_kernel(p, options.kernel);
  const GaussLegendre rule = gauss_legendre(options.n_radial);
  const double beta = p.beta();
  auto k_of_eps = [&](double beta_eps) { return std::sqrt(2.0 * p.mass * beta_eps * p.temperature); };

  double k0 = p.ir_cutoff > 0.0 ? p.ir_cutoff : k_of_eps(closed.beta_eps_c);
  auto min_value = [&](double kk) {
    const double mu = argmin_mu(p, kernel, rule, kk);
    return std::pair{mu, zero_mode(p, kernel, rule, kk, mu).value};
  };

  double mu_c = 0.0;
  int outer_iterations = 0;
  if (options.fixed_cutoff) {
    const auto [mu_star, value] = min_value(k0);
    if (value > kTangencyTolerance * p.temperature) {
      throw NoRoot("zero-mode pseudo-energy stays positive: infrared cutoff below the tangency value");
    }
    if (value >= -kTangencyTolerance * p.temperature) {
      mu_c = mu_star;
    } else {
      // Smallest root: ε(0; μ) is positive for μ ≤ 0 with a repulsive kernel.
      double lo = std::min(0.0, mu_star - p.temperature);
      const double f_lo = zero_mode(p, kernel, rule, k0, lo).value;
      if (!(f_lo > 0.0)) throw NoRoot("no bracket below the zero-mode minimum");
      mu_c = bisect([&](double mu) { return zero_mode(p, kernel, rule, k0, mu).value; }, lo, mu_star, f_lo);
    }
  } else {
    // Raising k₀ removes modes from the integral and lowers min_μ ε(0; μ);
    // tangency is the k₀ where that minimum touches zero.
    double e_lo = closed.beta_eps_c;
    double e_hi = closed.beta_eps_c;
    while (min_value(k_of_eps(e_lo)).second <= 0.0) {
      e_lo *= 0.5;
      if (e_lo < 1e-300) throw NoRoot("tangency search: no lower bracket");
    }
    while (min_value(k_of_eps(e_hi)).second > 0.0) {
      e_hi *= 2.0;
      if (e_hi > 1e6) throw NoRoot("tangency search: no upper bracket");
    }
    for (; outer_iterations < 200; ++outer_iterations) {
      const double mid = 0.5 * (e_lo + e_hi);
      if (mid <= e_lo || mid >= e_hi) break;
      if (min_value(k_of_eps(mid)).second > 0.0) e_lo = mid;
      else e_hi = mid;
    }
    k0 = k_of_eps(0.5 * (e_lo + e_hi));
    mu_c = min_value(k0).first;
  }

  const ZeroMode at_root = zero_mode(p, kernel, rule, k0, mu_c);
  const double eps0 = k0 * k0 / (2.0 * p.mass);
  CriticalPointResult r;
  r.method = CriticalMethod::full_kernel;
  r.beta_mu_c = beta * mu_c;
  r.beta_eps_c = beta * eps0;
  r.nc_lambda2 = -std::log(-std::expm1(-beta * (eps0 - mu_c)));
  r.diagnostics["mg"] = mg;
  r.diagnostics["k0"] = k0;
  r.diagnostics["zero_mode_residual"] = at_root.value * beta;
  r.diagnostics["zero_mode_slope"] = at_root.slope;
  r.diagnostics["closed_beta_mu_c"] = closed.beta_mu_c;
  r.diagnostics["closed_beta_eps_c"] = closed.beta_eps_c;
  r.diagnostics["relative_deviation_mu"] = (r.beta_mu_c - closed.beta_mu_c) / closed.beta_mu_c;
  r.diagnostics["relative_deviation_eps"] = (r.beta_eps_c - closed.beta_eps_c) / closed.beta_eps_c;
  r.diagnostics["kernel_constant"] = options.kernel == KernelMode::constant ? 1.0 : 0.0;
  r.diagnostics["fixed_cutoff"] = options.fixed_cutoff ? 1.0 : 0.0;
  r.diagnostics["outer_iterations"] = outer_iterations;
  return r;
}

double fit_comparison_constant(double mg_min, double mg_max, int n_points) {
  if (!(mg_min > 0.0 && mg_max > mg_min) || n_points < 2) throw ConfigError("invalid fit range");
  // βμ_c·2π/mg = log(2C) − log(mg) at fixed unit slope.
  double sum = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double mg = mg_min * std::pow(mg_max / mg_min, static_cast<double>(i) / (n_points - 1));
    const double y = 2.0 * kPi * closed_form_critical(mg).beta_mu_c / mg;
    sum += y + std::log(mg);
  }
  return 0.5 * std::exp(sum / n_points);
}

}  // namespace pseudogas
