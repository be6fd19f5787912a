#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pseudogas/core_model.hpp"
#include "pseudogas/quadrature_grid.hpp"

namespace pseudogas::cli {

/// Everything a run needs. Unset optionals take defaults that depend on
/// other fields (mass on dimension, uv_cutoff on mass and temperature,
/// eps0 on mg).
struct RunConfig {
  int dimension = 2;
  std::optional<double> mass;
  double coupling = 0.1;
  std::optional<double> mg;
  double temperature = 1.0;
  double chemical_potential = -1.0;
  std::optional<double> uv_cutoff;
  double ir_cutoff = 0.0;
  std::string statistics = "boson";

  int n_radial = 128;
  int n_angular = 64;
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iter = 10000;
  std::string kernel_mode = "exact";
  std::string cache_dir;

  std::string method = "closed";
  std::optional<double> eps0;
  bool fixed_cutoff = false;
  std::vector<double> scan;
  double mu_min = 0.0;
  std::optional<double> mu_max;
  double dk_min = 0.01;
  double dk_max = 10.0;
  int n_points = 200;
  unsigned long long seed = 1;

  std::string csv_path;
  std::string json_path;
  bool timing = false;

  bool operator==(const RunConfig&) const = default;
};

/// Flat JSON object; doubles are written in shortest round-trip form.
std::string to_json(const RunConfig& config);

/// Missing keys keep their defaults; unknown keys or wrong types are a ConfigError.
RunConfig config_from_json(const std::string& text);

/// Resolved physical parameters, validated.
ModelParams model_params(const RunConfig& config);

std::string to_json(const KernelMatrix& kernel);
KernelMatrix kernel_from_json(const std::string& text);

/// Kernel matrix through the on-disk cache in `cache_dir` (no cache when
/// empty). A file whose hash or size disagrees is rebuilt and overwritten.
KernelMatrix cached_kernel_matrix(const ModelParams& p, const MomentumGrid& grid, KernelMode mode,
                                  const std::string& cache_dir);

/// Entry point behind the executable. `args` excludes the program name.
/// Exit codes: 0 success, 2 configuration or usage error, 3 numerical
/// failure, 1 anything else. Errors go to `err` as one line of JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pseudogas::cli
