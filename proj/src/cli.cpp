#include "pseudogas/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "pseudogas/critical_point.hpp"
#include "pseudogas/diagrammatics.hpp"
#include "pseudogas/errors.hpp"
#include "pseudogas/pseudoenergy_solver.hpp"
#include "pseudogas/scattering_kernels.hpp"
#include "pseudogas/tba_1d.hpp"

namespace pseudogas::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

template <typename T>
void put(json& j, const char* key, const T& value) {
  j[key] = value;
}

template <typename T>
void put(json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
  else j[key] = nullptr;
}

template <typename T>
void take(const json& j, const char* key, T& value) {
  value = j.at(key).get<T>();
}

template <typename T>
void take(const json& j, const char* key, std::optional<T>& value) {
  const json& v = j.at(key);
  if (v.is_null()) value.reset();
  else value = v.get<T>();
}

template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("dimension", c.dimension);
  v("mass", c.mass);
  v("coupling", c.coupling);
  v("mg", c.mg);
  v("temperature", c.temperature);
  v("chemical_potential", c.chemical_potential);
  v("uv_cutoff", c.uv_cutoff);
  v("ir_cutoff", c.ir_cutoff);
  v("statistics", c.statistics);
  v("n_radial", c.n_radial);
  v("n_angular", c.n_angular);
  v("damping", c.damping);
  v("tolerance", c.tolerance);
  v("max_iter", c.max_iter);
  v("kernel_mode", c.kernel_mode);
  v("cache_dir", c.cache_dir);
  v("method", c.method);
  v("eps0", c.eps0);
  v("fixed_cutoff", c.fixed_cutoff);
  v("scan", c.scan);
  v("mu_min", c.mu_min);
  v("mu_max", c.mu_max);
  v("dk_min", c.dk_min);
  v("dk_max", c.dk_max);
  v("n_points", c.n_points);
  v("seed", c.seed);
  v("csv_path", c.csv_path);
  v("json_path", c.json_path);
  v("timing", c.timing);
}

json config_json(const RunConfig& config) {
  json j = json::object();
  visit_fields(config, [&](const char* key, const auto& value) { put(j, key, value); });
  return j;
}

RunConfig config_from_object(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig config;
  std::size_t known = 0;
  try {
    visit_fields(config, [&](const char* key, auto& value) {
      if (j.contains(key)) {
        take(j, key, value);
        ++known;
      }
    });
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  if (known != j.size()) {
    RunConfig probe;
    json reference = config_json(probe);
    for (const auto& item : j.items()) {
      if (!reference.contains(item.key())) throw ConfigError("unknown config key: " + item.key());
    }
  }
  return config;
}

Statistics parse_statistics(const std::string& s) {
  if (s == "boson") return Statistics::boson;
  if (s == "fermion") return Statistics::fermion;
  throw ConfigError("statistics must be boson or fermion, got " + s);
}

KernelMode parse_kernel_mode(const std::string& s) {
  if (s == "exact") return KernelMode::exact;
  if (s == "constant") return KernelMode::constant;
  throw ConfigError("kernel_mode must be exact or constant, got " + s);
}

const char* kernel_mode_name(KernelMode mode) { return mode == KernelMode::exact ? "exact" : "constant"; }

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("cannot write " + path);
}

// One CSV table, 10 significant digits.
struct Table {
  std::string header;
  std::vector<std::vector<double>> rows;

  std::string str() const {
    std::string s = header + "\n";
    char buf[32];
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", row[i]);
        if (i > 0) s += ',';
        s += buf;
      }
      s += '\n';
    }
    return s;
  }
};

struct Outcome {
  ordered_json summary;
  std::optional<Table> table;
};

double resolved_mass(const RunConfig& c) { return c.mass.value_or(c.dimension == 1 ? 0.5 : 1.0); }

double resolved_mg(const RunConfig& c) { return c.mg.value_or(resolved_mass(c) * c.coupling); }

SolverOptions solver_options(const RunConfig& c) { return {c.damping, c.tolerance, c.max_iter}; }

std::string resolved_cache_dir(const RunConfig& c) {
  if (const char* env = std::getenv("PSEUDOGAS_CACHE")) return env;
  return c.cache_dir;
}

Outcome run_kernel(const RunConfig& c) {
  const ModelParams p = model_params(c);
  const KernelMode mode = parse_kernel_mode(c.kernel_mode);
  if (c.n_points < 2) throw ConfigError("n_points must be >= 2");
  if (!(c.dk_min > 0.0 && c.dk_max > c.dk_min)) throw ConfigError("need 0 < dk_min < dk_max");
  Table table{"dk,G2", {}};
  for (int i = 0; i < c.n_points; ++i) {
    const double dk = c.dk_min + (c.dk_max - c.dk_min) * i / (c.n_points - 1);
    table.rows.push_back({dk, g2_kernel(p, dk, mode)});
  }
  ordered_json s;
  s["effective_coupling"] = effective_coupling(p);
  s["g2_at_dk_min"] = table.rows.front()[1];
  s["g2_at_dk_max"] = table.rows.back()[1];
  s["n_points"] = c.n_points;
  return {s, table};
}

Outcome run_solve(const RunConfig& c) {
  const ModelParams p = model_params(c);
  const KernelMode mode = parse_kernel_mode(c.kernel_mode);
  const MomentumGrid grid = build_grid(p, c.n_radial, c.n_angular);
  const KernelMatrix kernel = cached_kernel_matrix(p, grid, mode, resolved_cache_dir(c));
  const PseudoEnergyField field = solve_pseudo_energy(p, kernel, grid, solver_options(c));
  const Observables obs = observables(p, grid, field);
  Table table{"k,epsilon,f,f_tilde", {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.rows.push_back({grid.nodes[i], field.epsilon[i], obs.filling[i], obs.dressed_filling[i]});
  }
  ordered_json s;
  s["density"] = obs.density;
  s["free_energy"] = obs.free_energy;
  s["free_density"] = free_density(p, grid);
  s["free_gas_free_energy"] = free_gas_free_energy(p, grid);
  s["iterations"] = field.iterations;
  s["residual"] = field.residual;
  s["k_max"] = grid.k_max;
  return {s, table};
}

ordered_json critical_json(const CriticalPointResult& r) {
  ordered_json j;
  j["beta_mu_c"] = r.beta_mu_c;
  j["beta_eps_c"] = r.beta_eps_c;
  j["nc_lambda2"] = r.nc_lambda2;
  j["method"] = to_string(r.method);
  ordered_json d = ordered_json::object();
  for (const auto& [k, v] : r.diagnostics) d[k] = v;
  j["diagnostics"] = d;
  return j;
}

ordered_json critical_one(const RunConfig& c, double mg) {
  if (c.method == "closed") {
    ordered_json j = critical_json(closed_form_critical(mg));
    j["fitted_C"] = fit_comparison_constant();
    return j;
  }
  if (c.method == "cutoff") {
    const double eps0 = c.eps0.value_or(closed_form_critical(mg).beta_eps_c);
    ordered_json j;
    j["mg"] = mg;
    j["beta_eps0"] = eps0;
    j["roots"] = cutoff_roots(mg, eps0);
    j["root_offsets"] = cutoff_root_offsets(mg, eps0);
    return j;
  }
  if (c.method == "full") {
    const double uv = c.uv_cutoff.value_or(100.0 * std::sqrt(2.0));
    const double k0 = c.eps0 ? std::sqrt(2.0 * *c.eps0) : c.ir_cutoff;
    const ModelParams p =
        ModelParams::dimensionless_2d(mg, c.chemical_potential / c.temperature, uv, k0, Statistics::boson);
    CriticalSearchOptions options;
    options.kernel = parse_kernel_mode(c.kernel_mode);
    options.n_radial = c.n_radial;
    options.fixed_cutoff = c.fixed_cutoff || c.eps0.has_value();
    return critical_json(numeric_critical_mu(p, options));
  }
  throw ConfigError("method must be closed, cutoff or full, got " + c.method);
}

Outcome run_critical(const RunConfig& c) {
  if (c.scan.empty()) return {critical_one(c, resolved_mg(c)), std::nullopt};
  ordered_json results = ordered_json::array();
  for (double mg : c.scan) {
    ordered_json j = critical_one(c, mg);
    j["mg"] = mg;
    results.push_back(j);
  }
  ordered_json s;
  s["results"] = results;
  return {s, std::nullopt};
}

Outcome run_figure1(const RunConfig& c) {
  const double mg = resolved_mg(c);
  const double eps0 = c.eps0.value_or(closed_form_critical(mg).beta_eps_c);
  const double mu_max = c.mu_max.value_or(eps0 * (1.0 - 1e-3));
  Table table{"beta_mu,lhs,rhs", {}};
  double best_gap = INFINITY;
  double best_mu = 0.0;
  for (const auto& row : figure1_curves(mg, eps0, c.mu_min, mu_max, c.n_points)) {
    table.rows.push_back({row.beta_mu, row.lhs, row.rhs});
    if (std::abs(row.lhs - row.rhs) < best_gap) {
      best_gap = std::abs(row.lhs - row.rhs);
      best_mu = row.beta_mu;
    }
  }
  ordered_json s;
  s["mg"] = mg;
  s["beta_eps0"] = eps0;
  s["roots"] = cutoff_roots(mg, eps0);
  s["closest_approach_beta_mu"] = best_mu;
  s["closest_approach_gap"] = best_gap;
  return {s, table};
}

Outcome run_tba(const RunConfig& c) {
  const MomentumGrid grid = tba::build_tba_grid(c.temperature, c.chemical_potential, c.n_radial);
  tba::TbaOptions options;
  options.damping = c.damping;
  options.tolerance = c.tolerance;
  options.max_iter = c.max_iter;
  const tba::TbaField field = tba::solve_yang_yang(c.coupling, c.temperature, c.chemical_potential, grid, options);
  Table table{"k,epsilon", {}};
  for (std::size_t i = 0; i < grid.size(); ++i) table.rows.push_back({grid.nodes[i], field.epsilon[i]});
  const auto lo = tba::leading_order_comparison(c.coupling, c.temperature, c.chemical_potential, grid);
  ordered_json s;
  s["free_energy"] = tba::tba_free_energy(field, grid);
  s["free_fermion_free_energy"] = tba::free_fermion_free_energy(c.temperature, c.chemical_potential, grid);
  s["iterations"] = field.iterations;
  s["residual"] = field.residual;
  s["leading_order"] = {{"tba_first_order", lo.tba_first_order},
                        {"foam_first_order", lo.foam_first_order},
                        {"relative_gap", lo.relative_gap}};
  return {s, table};
}

Outcome run_verify(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> loops(2, 50);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto shape = diagrams::random_foam(loops(rng), rng());
    diagrams::coefficient_sum(shape);
    ++checked;
  }
  struct RingCase {
    double a, b;
    int s, n_max;
  };
  double max_gap = 0.0;
  for (const RingCase& rc : {RingCase{0.1, 1.0, 1, 60}, RingCase{-0.5, 1.0, -1, 80}, RingCase{0.5, 1.0, 1, 80},
                             RingCase{0.5, -1.0, 1, 80}}) {
    max_gap = std::max(max_gap, diagrams::ring_sum_check(rc.a, rc.b, rc.s, rc.n_max).gap);
  }
  if (!(max_gap < 1e-10)) throw InvariantViolation("ring resummation gap above 1e-10");
  ordered_json s;
  s["foams_checked"] = checked;
  s["all_unity"] = true;
  s["max_ring_gap"] = max_gap;
  return {s, std::nullopt};
}

std::string error_line(const char* type, const std::string& message, const json& extra = json::object()) {
  json j = {{"error", type}, {"message", message}};
  for (const auto& item : extra.items()) j[item.key()] = item.value();
  return j.dump();
}

// Registers `--flag` writing into overrides[key] with type T.
template <typename T>
void add_value(CLI::App* sub, json& overrides, const std::string& flag, const std::string& key,
               const std::string& help) {
  sub->add_option_function<T>(flag, [&overrides, key](const T& v) { overrides[key] = v; }, help);
}

void add_physics(CLI::App* sub, json& o) {
  add_value<int>(sub, o, "--dimension,-d", "dimension", "spatial dimension 1, 2 or 3");
  add_value<double>(sub, o, "--mass,-m", "mass", "particle mass (default 1, or 1/2 in d=1)");
  add_value<double>(sub, o, "--coupling,-g", "coupling", "bare coupling g");
  add_value<double>(sub, o, "--mg", "mg", "dimensionless coupling m*g (overrides --coupling)");
  add_value<double>(sub, o, "--temperature,-T", "temperature", "temperature");
  add_value<double>(sub, o, "--mu", "chemical_potential", "chemical potential");
  add_value<double>(sub, o, "--uv-cutoff", "uv_cutoff", "UV cutoff (default 100*sqrt(2mT))");
  add_value<double>(sub, o, "--ir-cutoff", "ir_cutoff", "IR cutoff k0");
  add_value<std::string>(sub, o, "--statistics", "statistics", "boson or fermion");
}

void add_numerics(CLI::App* sub, json& o) {
  add_value<int>(sub, o, "--n-radial", "n_radial", "radial Gauss-Legendre nodes");
  add_value<int>(sub, o, "--n-angular", "n_angular", "angular Gauss-Legendre nodes");
  add_value<double>(sub, o, "--damping", "damping", "fixed-point damping in (0,1]");
  add_value<double>(sub, o, "--tolerance", "tolerance", "fixed-point tolerance");
  add_value<int>(sub, o, "--max-iter", "max_iter", "iteration cap");
  add_value<std::string>(sub, o, "--kernel-mode", "kernel_mode", "exact or constant");
  add_value<std::string>(sub, o, "--cache-dir", "cache_dir", "kernel cache directory");
}

void add_outputs(CLI::App* sub, json& o, bool csv) {
  if (csv) add_value<std::string>(sub, o, "--csv", "csv_path", "CSV output file");
  add_value<std::string>(sub, o, "--json", "json_path", "JSON summary file (default stdout)");
  sub->add_flag_function("--timing", [&o](std::int64_t) { o["timing"] = true; }, "report wall time");
}

}  // namespace

std::string to_json(const RunConfig& config) { return config_json(config).dump(); }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_object(j);
}

ModelParams model_params(const RunConfig& c) {
  const double mass = resolved_mass(c);
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  const double coupling = c.mg ? *c.mg / mass : c.coupling;
  const double uv = c.uv_cutoff.value_or(100.0 * std::sqrt(2.0 * mass * c.temperature));
  return ModelParams::make(c.dimension, mass, coupling, c.temperature, c.chemical_potential, uv, c.ir_cutoff,
                           parse_statistics(c.statistics));
}

std::string to_json(const KernelMatrix& kernel) {
  json j;
  j["params_hash"] = hex64(kernel.params_hash);
  j["mode"] = kernel_mode_name(kernel.mode);
  j["n"] = kernel.n;
  j["entries"] = kernel.entries;
  return j.dump();
}

KernelMatrix kernel_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    KernelMatrix k;
    k.params_hash = std::stoull(j.at("params_hash").get<std::string>(), nullptr, 16);
    k.mode = parse_kernel_mode(j.at("mode").get<std::string>());
    k.n = j.at("n").get<std::size_t>();
    k.entries = j.at("entries").get<std::vector<double>>();
    if (k.entries.size() != k.n * k.n) throw ConfigError("kernel cache entry count does not match n");
    return k;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed kernel cache: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("malformed kernel cache: ") + e.what());
  }
}

KernelMatrix cached_kernel_matrix(const ModelParams& p, const MomentumGrid& grid, KernelMode mode,
                                  const std::string& cache_dir) {
  if (cache_dir.empty()) return build_kernel_matrix(p, grid, mode);
  namespace fs = std::filesystem;
  const std::uint64_t hash = params_hash(p, grid, mode);
  const fs::path path = fs::path(cache_dir) / ("kernel-" + hex64(hash) + ".json");
  if (fs::exists(path)) {
    try {
      KernelMatrix k = kernel_from_json(read_file(path.string()));
      if (k.params_hash == hash && k.n == grid.size() && k.mode == mode) return k;
    } catch (const ConfigError&) {
    }
  }
  KernelMatrix k = build_kernel_matrix(p, grid, mode);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  if (ec) throw ConfigError("cannot create cache directory " + cache_dir);
  const fs::path tmp = path.string() + ".tmp";
  write_file(tmp.string(), to_json(k));
  fs::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot write " + path.string());
  return k;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-body pseudo-energy thermodynamics of quantum gases", "pseudogas"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  json overrides = json::object();
  app.add_option("--config,-c", config_path, "flat JSON config; flags override its values");

  using Runner = std::function<Outcome(const RunConfig&)>;
  std::map<CLI::App*, Runner> runners;

  auto* kernel = app.add_subcommand("kernel", "tabulate the two-body kernel G2(dk)");
  add_physics(kernel, overrides);
  add_value<std::string>(kernel, overrides, "--kernel-mode", "kernel_mode", "exact or constant");
  add_value<double>(kernel, overrides, "--dk-min", "dk_min", "smallest momentum transfer");
  add_value<double>(kernel, overrides, "--dk-max", "dk_max", "largest momentum transfer");
  add_value<int>(kernel, overrides, "--n-points", "n_points", "table rows");
  add_outputs(kernel, overrides, true);
  runners[kernel] = run_kernel;

  auto* solve = app.add_subcommand("solve", "solve the pseudo-energy equation");
  add_physics(solve, overrides);
  add_numerics(solve, overrides);
  add_outputs(solve, overrides, true);
  runners[solve] = run_solve;

  auto* critical = app.add_subcommand("critical", "critical point of the 2D Bose gas");
  add_physics(critical, overrides);
  add_numerics(critical, overrides);
  add_value<std::string>(critical, overrides, "--method", "method", "closed, cutoff or full");
  add_value<double>(critical, overrides, "--eps0", "eps0", "infrared cutoff energy in units of T");
  critical->add_flag_function("--fixed-cutoff", [&overrides](std::int64_t) { overrides["fixed_cutoff"] = true; },
                              "hold the infrared cutoff instead of solving for tangency");
  add_value<std::vector<double>>(critical, overrides, "--scan", "scan", "list of mg values");
  add_outputs(critical, overrides, false);
  runners[critical] = run_critical;

  auto* figure1 = app.add_subcommand("figure1", "both sides of the cutoff equation against beta*mu");
  add_physics(figure1, overrides);
  add_value<double>(figure1, overrides, "--eps0", "eps0", "infrared cutoff energy in units of T");
  add_value<double>(figure1, overrides, "--mu-min", "mu_min", "smallest beta*mu");
  add_value<double>(figure1, overrides, "--mu-max", "mu_max", "largest beta*mu");
  add_value<int>(figure1, overrides, "--n-points", "n_points", "table rows");
  add_outputs(figure1, overrides, true);
  runners[figure1] = run_figure1;

  auto* tba = app.add_subcommand("tba", "Yang-Yang equation of the 1D Bose gas");
  add_physics(tba, overrides);
  add_numerics(tba, overrides);
  add_outputs(tba, overrides, true);
  runners[tba] = run_tba;

  auto* verify = app.add_subcommand("verify", "foam coefficient and ring resummation identities");
  add_value<unsigned long long>(verify, overrides, "--seed", "seed", "random seed");
  add_outputs(verify, overrides, false);
  runners[verify] = run_verify;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_line("UsageError", e.what()) << '\n';
    return 2;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    json merged = config_path.empty() ? json::object() : json::parse(read_file(config_path), nullptr, false);
    if (merged.is_discarded()) throw ConfigError("config file is not valid JSON: " + config_path);
    if (!merged.is_object()) throw ConfigError("config file must hold a JSON object");
    merged.update(overrides);
    const RunConfig config = config_from_object(merged);

    CLI::App* chosen = app.get_subcommands().front();
    Outcome outcome = runners.at(chosen)(config);

    ordered_json summary;
    summary["command"] = chosen->get_name();
    summary["inputs"] = ordered_json::parse(to_json(config));
    for (const auto& item : outcome.summary.items()) summary[item.key()] = item.value();
    if (config.timing) {
      summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (outcome.table && !config.csv_path.empty()) write_file(config.csv_path, outcome.table->str());
    const std::string text = summary.dump(2) + "\n";
    if (config.json_path.empty()) out << text;
    else write_file(config.json_path, text);
    return 0;
  } catch (const ConfigError& e) {
    err << error_line("ConfigError", e.what()) << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    err << error_line("NonConvergence", e.what(), {{"iterations", e.iterations()}, {"residual", e.residual()}})
        << '\n';
    return 3;
  } catch (const BranchError& e) {
    err << error_line("BranchError", e.what(), {{"row", e.row()}, {"col", e.col()}}) << '\n';
    return 3;
  } catch (const FugacityError& e) {
    err << error_line("FugacityError", e.what()) << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << error_line("DomainError", e.what()) << '\n';
    return 3;
  } catch (const QuadratureError& e) {
    err << error_line("QuadratureError", e.what()) << '\n';
    return 3;
  } catch (const NoRoot& e) {
    err << error_line("NoRoot", e.what()) << '\n';
    return 3;
  } catch (const InvariantViolation& e) {
    err << error_line("InvariantViolation", e.what()) << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << error_line("Error", e.what()) << '\n';
    return 1;
  }
}

}  // namespace pseudogas::cli
