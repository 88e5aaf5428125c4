// dpsqm: command-line front end for the discrete-phase-space quantum
// mechanics library. Subcommands expose the operator structure checks, the
// discrete oscillator, the lattice wave-equation evolution, the symmetry
// generator checks, and the phase-space geometry exports. Every run resolves
// its configuration (flags over config file over defaults), writes a
// manifest echoing the resolved values, and exits 0 only when all checks it
// ran have passed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpsqm/errors.hpp"
#include "dpsqm/expm.hpp"
#include "dpsqm/geometry.hpp"
#include "dpsqm/io.hpp"
#include "dpsqm/klein_gordon.hpp"
#include "dpsqm/lattice.hpp"
#include "dpsqm/oscillator.hpp"
#include "dpsqm/poincare.hpp"
#include "dpsqm/units.hpp"

namespace fs = std::filesystem;
using namespace dpsqm;

namespace {

// ---------------------------------------------------------------------------
// Config resolution: flag > config file > default.

using ConfigMap = std::map<std::string, std::string>;

ConfigMap load_config(const std::string& path) {
  ConfigMap map;
  if (path.empty()) return map;
  for (auto& [key, value] : read_key_value_file(path)) {
    map[key] = value;  // later duplicates override earlier ones
  }
  return map;
}

void reject_unknown_keys(const ConfigMap& config,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : config) {
    if (key == "subcommand" || key == "timestamp") continue;
    if (!known.count(key)) {
      throw UsageError("unknown configuration key '" + key + "'");
    }
  }
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("configuration key '" + key + "' expects a number, got '" +
                     text + "'");
  }
}

long long parse_integer(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("configuration key '" + key +
                     "' expects an integer, got '" + text + "'");
  }
}

bool parse_flag(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw UsageError("configuration key '" + key +
                   "' expects true/false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      current.push_back(ch);
    }
  }
  parts.push_back(current);
  return parts;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& key) {
  std::vector<double> values;
  for (const auto& part : split_list(text)) {
    values.push_back(parse_double(part, key));
  }
  return values;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& key) {
  std::vector<int> values;
  for (const auto& part : split_list(text)) {
    if (part.empty()) continue;  // tolerate trailing commas / empty input
    values.push_back(static_cast<int>(parse_integer(part, key)));
  }
  return values;
}

template <typename T>
std::string join_list(const std::vector<T>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) text += ",";
    if constexpr (std::is_same_v<T, double>) {
      text += format_double(values[i]);
    } else {
      text += std::to_string(values[i]);
    }
  }
  return text;
}

// Applies a config-file value to `target` unless the flag was given.
void fill(const CLI::Option* opt, const ConfigMap& config,
          const std::string& key, double& target) {
  if (opt->count() > 0) return;
  if (auto it = config.find(key); it != config.end()) {
    target = parse_double(it->second, key);
  }
}

void fill(const CLI::Option* opt, const ConfigMap& config,
          const std::string& key, int& target) {
  if (opt->count() > 0) return;
  if (auto it = config.find(key); it != config.end()) {
    target = static_cast<int>(parse_integer(it->second, key));
  }
}

void fill(const CLI::Option* opt, const ConfigMap& config,
          const std::string& key, long long& target) {
  if (opt->count() > 0) return;
  if (auto it = config.find(key); it != config.end()) {
    target = parse_integer(it->second, key);
  }
}

void fill(const CLI::Option* opt, const ConfigMap& config,
          const std::string& key, std::string& target) {
  if (opt->count() > 0) return;
  if (auto it = config.find(key); it != config.end()) target = it->second;
}

void fill(const CLI::Option* opt, const ConfigMap& config,
          const std::string& key, bool& target) {
  if (opt->count() > 0) return;
  if (auto it = config.find(key); it != config.end()) {
    target = parse_flag(it->second, key);
  }
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw UsageError("format must be csv or json, got '" + name + "'");
}

UnitMode parse_units(const std::string& name) {
  if (name == "fundamental") return UnitMode::fundamental;
  if (name == "explicit") return UnitMode::explicit_constants;
  throw UsageError("units must be fundamental or explicit, got '" + name +
                   "'");
}

// ---------------------------------------------------------------------------
// Shared option bundles.

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::string format_name = "csv";

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;

  void attach(CLI::App* cmd) {
    config_opt = cmd->add_option("--config", config_path,
                                 "Flat key = value configuration file");
    out_opt = cmd->add_option("--out", out_dir, "Output directory");
    format_opt =
        cmd->add_option("--format", format_name, "Table format: csv or json");
  }

  void resolve(const ConfigMap& config) {
    fill(out_opt, config, "out", out_dir);
    fill(format_opt, config, "format", format_name);
  }
};

struct UnitOptions {
  std::string units_name = "fundamental";
  double hbar = 1.0;
  double c = 1.0;
  double l = 1.0;
  double nu = 1.0;
  bool hbar_set = false, c_set = false, l_set = false, nu_set = false;

  CLI::Option* units_opt = nullptr;
  CLI::Option* hbar_opt = nullptr;
  CLI::Option* c_opt = nullptr;
  CLI::Option* l_opt = nullptr;
  CLI::Option* nu_opt = nullptr;

  void attach(CLI::App* cmd) {
    units_opt = cmd->add_option("--units", units_name,
                                "Unit system: fundamental or explicit");
    hbar_opt = cmd->add_option("--hbar", hbar, "Action scale (explicit units)");
    c_opt = cmd->add_option("--c", c, "Speed of light (explicit units)");
    l_opt = cmd->add_option("--l", l, "Characteristic length");
    nu_opt = cmd->add_option("--nu", nu, "Oscillator frequency");
  }

  Constants resolve(const ConfigMap& config) {
    fill(units_opt, config, "units", units_name);
    const UnitMode mode = parse_units(units_name);
    Constants constants = mode == UnitMode::fundamental
                              ? Constants::fundamental()
                              : Constants::explicit_si();
    const auto take = [&](CLI::Option* opt, const char* key, double& flag_value,
                          bool& given, double& slot) {
      given = opt->count() > 0 || config.count(key) > 0;
      fill(opt, config, key, flag_value);
      if (given) slot = flag_value;
    };
    take(hbar_opt, "hbar", hbar, hbar_set, constants.hbar);
    take(c_opt, "c", c, c_set, constants.c);
    take(l_opt, "l", l, l_set, constants.l);
    take(nu_opt, "nu", nu, nu_set, constants.nu);
    if (mode == UnitMode::fundamental) {
      const bool overridden = (hbar_set && constants.hbar != 1.0) ||
                              (c_set && constants.c != 1.0) ||
                              (l_set && constants.l != 1.0) ||
                              (nu_set && constants.nu != 1.0);
      if (overridden) {
        throw UsageError(
            "fundamental units fix hbar = c = l = nu = 1; use --units "
            "explicit to override constants");
      }
    }
    constants.validate();
    return constants;
  }

  void echo(std::vector<std::pair<std::string, std::string>>& entries,
            const Constants& constants) const {
    entries.emplace_back("units", unit_mode_name(constants.mode));
    entries.emplace_back("hbar", format_double(constants.hbar));
    entries.emplace_back("c", format_double(constants.c));
    entries.emplace_back("l", format_double(constants.l));
    entries.emplace_back("nu", format_double(constants.nu));
  }
};

using ManifestEntries = std::vector<std::pair<std::string, std::string>>;

fs::path prepare_output(const std::string& out_dir,
                        const std::string& subcommand,
                        ManifestEntries entries) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  ManifestEntries manifest;
  manifest.emplace_back("subcommand", subcommand);
  for (auto& entry : entries) manifest.push_back(std::move(entry));
  manifest.emplace_back("timestamp", timestamp_utc());
  write_key_value_file(dir / "manifest.txt", manifest);
  return dir;
}

int finish(const fs::path& dir, std::vector<CheckReport> reports,
           const std::map<std::string, std::string>& context) {
  write_reports_json(dir / "report.json", reports);
  write_reports_text(dir / "report.txt", reports, context);
  bool ok = true;
  for (const auto& report : reports) {
    std::printf("%-44s %s  (interior %.3e, full %.3e, tol %.3e)\n",
                report.test.c_str(), report.pass ? "pass" : "FAIL",
                report.norm_interior, report.norm_full, report.tolerance);
    ok = ok && report.pass;
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// ops-check

struct OpsArgs {
  CommonOptions common;
  int nmax = 64;
  int margin = 2;
  double tol = 1e-14;
  CLI::Option* nmax_opt = nullptr;
  CLI::Option* margin_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
};

int cmd_ops_check(OpsArgs& args) {
  const ConfigMap config = load_config(args.common.config_path);
  reject_unknown_keys(config,
                      {"nmax", "margin", "tol", "out", "format"});
  args.common.resolve(config);
  fill(args.nmax_opt, config, "nmax", args.nmax);
  fill(args.margin_opt, config, "margin", args.margin);
  fill(args.tol_opt, config, "tol", args.tol);

  const fs::path dir = prepare_output(
      args.common.out_dir, "ops-check",
      {{"nmax", std::to_string(args.nmax)},
       {"margin", std::to_string(args.margin)},
       {"tol", format_double(args.tol)},
       {"out", args.common.out_dir},
       {"format", args.common.format_name}});

  const int n_max = args.nmax;
  lattice_dimension(n_max);  // validates n_max >= 2
  const SparseReal delta = build_delta(n_max);
  const SparseReal delta_prime = build_delta_prime(n_max);
  const SparseReal circ = build_delta_circ(n_max);
  const SparseReal sharp = build_delta_sharp(n_max);

  write_matrix_text_file(dir / "operator_delta.txt", delta);
  write_matrix_text_file(dir / "operator_delta_prime.txt", delta_prime);
  write_matrix_text_file(dir / "operator_delta_circ.txt", circ);
  write_matrix_text_file(dir / "operator_delta_sharp.txt", sharp);

  std::vector<CheckReport> reports;
  const auto push = [&](std::string name, double interior, double full,
                        double tolerance) {
    reports.push_back(
        {std::move(name), interior, full, tolerance, interior <= tolerance});
  };

  // Structural identities that hold exactly in floating point.
  push("circ_symmetry", full_max(SparseReal(circ - SparseReal(circ.transpose()))),
       full_max(SparseReal(circ - SparseReal(circ.transpose()))), 0.0);
  push("sharp_antisymmetry",
       full_max(SparseReal(sharp + SparseReal(sharp.transpose()))),
       full_max(SparseReal(sharp + SparseReal(sharp.transpose()))), 0.0);

  // [sharp, circ] = I on the interior; the last diagonal entry carries the
  // truncation defect -(n_max + 1), reported through the full norm.
  {
    SparseReal com = commutator(sharp, circ);
    SparseReal identity(com.rows(), com.cols());
    identity.setIdentity();
    const SparseReal defect = SparseReal(com - identity);
    double interior = 0.0;
    for (int N = 0; N <= n_max - args.margin; ++N) {
      interior = std::max(interior, commutation_deviation(n_max, N));
    }
    push("commutator_minus_identity", interior, full_max(defect), args.tol);
  }

  // [delta, delta_prime] annihilates basis vectors away from both
  // boundaries. Unlike the weighted pair, the unweighted differences see the
  // bottom edge too: the backward difference at n = 0 reads the hard zero at
  // n = -1, leaving [delta, delta_prime] = diag(-1, 0, ..., 0, +1).
  {
    const SparseReal com = commutator(delta, delta_prime);
    double interior = 0.0;
    for (int j = 0; j < com.outerSize(); ++j) {
      if (j < 1 || j > n_max - args.margin) continue;
      for (SparseReal::InnerIterator it(com, j); it; ++it) {
        interior = std::max(interior, std::abs(it.value()));
      }
    }
    push("forward_backward_commutator", interior, full_max(com), args.tol);
  }

  // Split decompositions reproduce the direct difference forms.
  push("circ_split_matches_direct",
       full_max(SparseReal(build_delta_circ_split(n_max) - circ)),
       full_max(SparseReal(build_delta_circ_split(n_max) - circ)), args.tol);
  push("sharp_split_matches_direct",
       full_max(SparseReal(build_delta_sharp_split(n_max) - sharp)),
       full_max(SparseReal(build_delta_sharp_split(n_max) - sharp)), args.tol);

  // (circ^2 - sharp^2)/2 collapses to an exactly diagonal matrix: the
  // off-diagonal second-difference terms cancel identically.
  {
    SparseReal h = SparseReal(0.5 * (SparseReal(circ * circ) -
                                     SparseReal(sharp * sharp)));
    h.prune(0.0);
    DenseReal dense(h);
    dense.diagonal().setZero();
    const double offdiag = dense.cwiseAbs().maxCoeff();
    push("square_difference_diagonal", offdiag, offdiag, 0.0);
  }

  return finish(dir, std::move(reports),
                {{"n_max", std::to_string(n_max)},
                 {"margin", std::to_string(args.margin)}});
}

// ---------------------------------------------------------------------------
// oscillator

struct OscArgs {
  CommonOptions common;
  UnitOptions units;
  int nmax = 64;
  int efn = 2;
  double qmin = -5.0;
  double qmax = 5.0;
  int gridpoints = 101;
  CLI::Option* nmax_opt = nullptr;
  CLI::Option* efn_opt = nullptr;
  CLI::Option* qmin_opt = nullptr;
  CLI::Option* qmax_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
};

int cmd_oscillator(OscArgs& args) {
  const ConfigMap config = load_config(args.common.config_path);
  reject_unknown_keys(config,
                      {"nmax", "units", "hbar", "c", "l", "nu", "efn", "qmin",
                       "qmax", "gridpoints", "out", "format"});
  args.common.resolve(config);
  const Constants constants = args.units.resolve(config);
  fill(args.nmax_opt, config, "nmax", args.nmax);
  fill(args.efn_opt, config, "efn", args.efn);
  fill(args.qmin_opt, config, "qmin", args.qmin);
  fill(args.qmax_opt, config, "qmax", args.qmax);
  fill(args.grid_opt, config, "gridpoints", args.gridpoints);

  ManifestEntries entries = {{"nmax", std::to_string(args.nmax)}};
  args.units.echo(entries, constants);
  entries.emplace_back("efn", std::to_string(args.efn));
  entries.emplace_back("qmin", format_double(args.qmin));
  entries.emplace_back("qmax", format_double(args.qmax));
  entries.emplace_back("gridpoints", std::to_string(args.gridpoints));
  entries.emplace_back("out", args.common.out_dir);
  entries.emplace_back("format", args.common.format_name);
  const fs::path dir =
      prepare_output(args.common.out_dir, "oscillator", std::move(entries));
  const OutputFormat format = parse_format(args.common.format_name);

  if (args.gridpoints < 2) {
    throw UsageError("eigenfunction export needs at least two grid points");
  }
  if (!(args.qmin < args.qmax)) {
    throw UsageError("eigenfunction export needs qmin < qmax");
  }

  const Spectrum spectrum = solve_discrete_spectrum(args.nmax, constants);
  const double scale = constants.energy_scale();

  // Spectrum table: interior levels with the three energy computations.
  Table table;
  table.columns = {"N", "e_discrete", "e_q_integral", "e_y_integral",
                   "overlap"};
  double worst_level = 0.0;
  double worst_agreement = 0.0;
  double worst_overlap = 0.0;
  for (int N = 0; N <= spectrum.interior_max; ++N) {
    const double e_discrete = spectrum.energies(N);
    const double e_q = energy_q_representation(N, constants);
    const double e_y = energy_y_representation(N, constants);
    table.add_row({std::to_string(N), format_double(e_discrete),
                   format_double(e_q), format_double(e_y),
                   format_double(spectrum.overlaps(N))});
    const double nominal = (double(N) + 0.5) * scale;
    worst_level =
        std::max(worst_level, std::abs(e_discrete - nominal) / scale);
    worst_agreement = std::max({worst_agreement,
                                std::abs(e_q - e_discrete) / scale,
                                std::abs(e_y - e_discrete) / scale});
    worst_overlap = std::max(worst_overlap, 1.0 - spectrum.overlaps(N));
  }
  write_table(dir, "spectrum", table, format);

  // Eigenfunction tabulation.
  {
    Table psi;
    psi.columns = {"q", "psi"};
    for (int i = 0; i < args.gridpoints; ++i) {
      const double q = args.qmin + (args.qmax - args.qmin) * double(i) /
                                       double(args.gridpoints - 1);
      psi.add_row({format_double(q),
                   format_double(continuum_eigenstate_q(args.efn, q,
                                                        constants))});
    }
    write_table(dir, "eigenfunction", psi, format);
  }

  // Cross-representation and analytic-structure checks.
  const int overlap_max = std::min(12, spectrum.interior_max);
  double worst_ortho = 0.0;
  for (int N = 0; N <= overlap_max; ++N) {
    for (int M = 0; M <= overlap_max; ++M) {
      const double target = N == M ? 1.0 : 0.0;
      worst_ortho = std::max(
          worst_ortho, std::abs(eigenstate_overlap_q(N, M, constants) -
                                target));
    }
  }
  double worst_ode = 0.0;
  for (int N = 0; N <= std::min(8, spectrum.interior_max); ++N) {
    worst_ode = std::max(worst_ode, y_equation_residual(N));
  }

  std::vector<CheckReport> reports;
  reports.push_back({"discrete_levels_match_ladder", worst_level, worst_level,
                     1e-10, worst_level <= 1e-10});
  reports.push_back({"representation_agreement", worst_agreement,
                     worst_agreement, 1e-10, worst_agreement <= 1e-10});
  reports.push_back({"eigenvector_overlap", worst_overlap, worst_overlap,
                     1e-10, worst_overlap <= 1e-10});
  reports.push_back({"continuum_orthonormality", worst_ortho, worst_ortho,
                     1e-8, worst_ortho <= 1e-8});
  reports.push_back({"action_equation_residual", worst_ode, worst_ode, 1e-5,
                     worst_ode <= 1e-5});
  return finish(dir, std::move(reports),
                {{"n_max", std::to_string(args.nmax)},
                 {"units", unit_mode_name(constants.mode)}});
}

// ---------------------------------------------------------------------------
// kg

struct KgArgs {
  CommonOptions common;
  int nmax = 6;
  double mass = 1.0;
  double dt = 0.0;  // 0 = choose automatically per preset
  long long steps = 1000;
  int margin = 2;
  std::string initial = "eigenmode";
  long long seed = 12345;
  long long stride = 1;
  CLI::Option* nmax_opt = nullptr;
  CLI::Option* mass_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* margin_opt = nullptr;
  CLI::Option* initial_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* stride_opt = nullptr;
};

int cmd_kg(KgArgs& args) {
  const ConfigMap config = load_config(args.common.config_path);
  reject_unknown_keys(config, {"nmax", "mass", "dt", "steps", "margin",
                               "initial", "seed", "stride", "out", "format"});
  args.common.resolve(config);
  fill(args.nmax_opt, config, "nmax", args.nmax);
  fill(args.mass_opt, config, "mass", args.mass);
  fill(args.dt_opt, config, "dt", args.dt);
  fill(args.steps_opt, config, "steps", args.steps);
  fill(args.margin_opt, config, "margin", args.margin);
  fill(args.initial_opt, config, "initial", args.initial);
  fill(args.seed_opt, config, "seed", args.seed);
  fill(args.stride_opt, config, "stride", args.stride);

  if (args.initial != "eigenmode" && args.initial != "random" &&
      args.initial != "zero") {
    throw UsageError("initial must be eigenmode, random, or zero, got '" +
                     args.initial + "'");
  }
  if (args.steps < 1) throw UsageError("steps must be positive");
  if (args.stride < 1) throw UsageError("stride must be positive");
  if (!(args.mass > 0.0)) throw UsageError("mass must be positive");
  lattice_dimension(args.nmax);

  const SparseReal k = assemble_spatial_kg_generator(args.nmax, args.mass);
  const int dim1 = args.nmax + 1;
  const Eigen::Index dim = Eigen::Index(dim1) * dim1 * dim1;

  // Initial data and the automatic time step.
  VecReal phi0 = VecReal::Zero(dim);
  VecReal pi0 = VecReal::Zero(dim);
  double mode_omega = 0.0;
  VecReal mode_vector;
  if (args.initial == "eigenmode") {
    const auto modes = spatial_eigenmodes(k);
    mode_vector = modes.front().vector;
    mode_omega = modes.front().omega;
    phi0 = mode_vector;
  } else if (args.initial == "random") {
    std::mt19937 rng(static_cast<std::uint32_t>(args.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index i = 0; i < dim; ++i) phi0(i) = gauss(rng);
    for (Eigen::Index i = 0; i < dim; ++i) pi0(i) = gauss(rng);
    phi0 /= phi0.norm();
    pi0 /= pi0.norm();
  }
  double dt = args.dt;
  if (!(dt > 0.0)) {
    dt = args.initial == "eigenmode" ? 1e-3 / mode_omega
                                     : 0.05 * max_stable_dt(k);
  }

  ManifestEntries entries = {{"nmax", std::to_string(args.nmax)},
                             {"mass", format_double(args.mass)},
                             {"dt", format_double(dt)},
                             {"steps", std::to_string(args.steps)},
                             {"margin", std::to_string(args.margin)},
                             {"initial", args.initial},
                             {"seed", std::to_string(args.seed)},
                             {"stride", std::to_string(args.stride)},
                             {"out", args.common.out_dir},
                             {"format", args.common.format_name}};
  const fs::path dir =
      prepare_output(args.common.out_dir, "kg", std::move(entries));
  const OutputFormat format = parse_format(args.common.format_name);

  const int steps = static_cast<int>(args.steps);
  const EvolutionResult result = evolve_leapfrog(k, phi0, pi0, dt, steps);

  // Trajectory export: the full field at strided time slices.
  {
    Table trajectory;
    trajectory.columns = {"t", "n1", "n2", "n3", "re_phi", "im_phi"};
    for (int s = 0; s <= steps; s += static_cast<int>(args.stride)) {
      const std::string t_text = format_double(result.times(s));
      for (int n1 = 0; n1 < dim1; ++n1) {
        for (int n2 = 0; n2 < dim1; ++n2) {
          for (int n3 = 0; n3 < dim1; ++n3) {
            const Eigen::Index flat =
                (Eigen::Index(n1) * dim1 + n2) * dim1 + n3;
            trajectory.add_row({t_text, std::to_string(n1),
                                std::to_string(n2), std::to_string(n3),
                                format_double(result.phi(flat, s)),
                                format_double(0.0)});
          }
        }
      }
    }
    write_table(dir, "trajectory", trajectory, format);
  }

  // Energy export.
  {
    Table energy;
    energy.columns = {"t", "energy"};
    for (int s = 0; s <= steps; s += static_cast<int>(args.stride)) {
      energy.add_row({format_double(result.times(s)),
                      format_double(result.energy(s))});
    }
    write_table(dir, "energy", energy, format);
  }

  std::vector<CheckReport> reports;

  // The computed history satisfies its own recurrence to roundoff.
  const ResidualStats recurrence =
      kg_residual_3plus1(result.phi, dt, k, args.nmax, args.margin);
  reports.push_back({"leapfrog_recurrence_residual", recurrence.max_abs,
                     recurrence.max_abs, 1e-9, recurrence.max_abs <= 1e-9});

  const double drift_tol = args.initial == "random" ? 1e-2 : 1e-6;
  reports.push_back({"energy_drift", result.energy_drift, result.energy_drift,
                     drift_tol, result.energy_drift <= drift_tol});

  if (args.initial == "eigenmode") {
    const VecReal unit = mode_vector / mode_vector.norm();
    double worst = 0.0;
    for (int s = 0; s <= steps; ++s) {
      const double projected = unit.dot(result.phi.col(s)) /
                               mode_vector.norm();
      worst = std::max(
          worst, std::abs(projected - std::cos(mode_omega * result.times(s))));
    }
    reports.push_back(
        {"eigenmode_cosine_tracking", worst, worst, 1e-4, worst <= 1e-4});
  }

  if (args.initial == "zero") {
    const double stray = result.phi.cwiseAbs().maxCoeff();
    reports.push_back({"zero_data_stays_zero", stray, stray, 0.0,
                       stray <= 0.0});
  }

  // Reversing the final velocity and evolving again returns to the start.
  {
    const VecReal phi_end = result.phi.col(steps);
    const VecReal pi_end = -result.pi.col(steps);
    const EvolutionResult back = evolve_leapfrog(k, phi_end, pi_end, dt, steps);
    const double err_phi =
        (back.phi.col(steps) - phi0).cwiseAbs().maxCoeff();
    const double err_pi = (back.pi.col(steps) + pi0).cwiseAbs().maxCoeff();
    const double worst = std::max(err_phi, err_pi);
    reports.push_back({"time_reversal", worst, worst, 1e-10, worst <= 1e-10});
  }

  return finish(dir, std::move(reports),
                {{"n_max", std::to_string(args.nmax)},
                 {"mass", format_double(args.mass)},
                 {"dt", format_double(dt)},
                 {"initial", args.initial}});
}

// ---------------------------------------------------------------------------
// poincare

struct PoincareArgs {
  CommonOptions common;
  int nmax = 6;
  double mass = 1.0;
  long long steps = 1000;
  int margin = 4;
  std::string cmu = "0.1,0.2,0,0.05";
  std::string omega = "0,0,0,0,0,0";
  std::string boost = "1,0,0";
  bool nullcheck = false;
  CLI::Option* nmax_opt = nullptr;
  CLI::Option* mass_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* margin_opt = nullptr;
  CLI::Option* cmu_opt = nullptr;
  CLI::Option* omega_opt = nullptr;
  CLI::Option* boost_opt = nullptr;
  CLI::Option* null_opt = nullptr;
};

int cmd_poincare(PoincareArgs& args) {
  const ConfigMap config = load_config(args.common.config_path);
  reject_unknown_keys(config,
                      {"nmax", "mass", "steps", "margin", "cmu", "omega",
                       "boost", "nullcheck", "out", "format"});
  args.common.resolve(config);
  fill(args.nmax_opt, config, "nmax", args.nmax);
  fill(args.mass_opt, config, "mass", args.mass);
  fill(args.steps_opt, config, "steps", args.steps);
  fill(args.margin_opt, config, "margin", args.margin);
  fill(args.cmu_opt, config, "cmu", args.cmu);
  fill(args.omega_opt, config, "omega", args.omega);
  fill(args.boost_opt, config, "boost", args.boost);
  fill(args.null_opt, config, "nullcheck", args.nullcheck);

  const std::vector<double> c_list = parse_double_list(args.cmu, "cmu");
  const std::vector<double> w_list = parse_double_list(args.omega, "omega");
  const std::vector<double> b_list = parse_double_list(args.boost, "boost");
  if (c_list.size() != 4) throw UsageError("cmu expects four components");
  if (w_list.size() != 6) throw UsageError("omega expects six components");
  if (b_list.size() != 3) throw UsageError("boost expects three components");
  if (args.steps < 8) throw UsageError("steps must be at least 8");
  if (!(args.mass > 0.0)) throw UsageError("mass must be positive");
  lattice_dimension(args.nmax);

  std::array<double, 4> c{};
  std::array<double, 6> w{};
  std::array<double, 3> b{};
  std::copy(c_list.begin(), c_list.end(), c.begin());
  std::copy(w_list.begin(), w_list.end(), w.begin());
  std::copy(b_list.begin(), b_list.end(), b.begin());

  ManifestEntries entries = {{"nmax", std::to_string(args.nmax)},
                             {"mass", format_double(args.mass)},
                             {"steps", std::to_string(args.steps)},
                             {"margin", std::to_string(args.margin)},
                             {"cmu", join_list(c_list)},
                             {"omega", join_list(w_list)},
                             {"boost", join_list(b_list)},
                             {"nullcheck", args.nullcheck ? "true" : "false"},
                             {"out", args.common.out_dir},
                             {"format", args.common.format_name}};
  const fs::path dir =
      prepare_output(args.common.out_dir, "poincare", std::move(entries));

  // Fail the memory budget before any large dense stage.
  const std::size_t required = dense_bytes_4d(args.nmax);
  if (required > kDefaultMemoryBudgetBytes) {
    throw MemoryBudgetError(required, kDefaultMemoryBudgetBytes);
  }

  std::vector<CheckReport> reports;

  const PoincareGenerators gens = build_generators(args.nmax);
  for (auto& report :
       check_casimir_commutation(gens, args.margin, 1e-12)) {
    reports.push_back(std::move(report));
  }

  // Finite transforms: identity at zero, orthogonality, roundtrip, and the
  // first-order expansion against the generator itself.
  const Eigen::Index dim = gens.casimir.rows();
  const std::array<double, 4> zero4{};
  const std::array<double, 6> zero6{};
  {
    const DenseReal u0 = build_finite_transform(args.nmax, zero4, zero6);
    const double dev =
        (u0 - DenseReal::Identity(dim, dim)).cwiseAbs().maxCoeff();
    reports.push_back(
        {"identity_at_zero_parameters", dev, dev, 0.0, dev <= 0.0});
  }
  const DenseReal u = build_finite_transform(args.nmax, c, w);
  {
    const double dev =
        (u.transpose() * u - DenseReal::Identity(dim, dim))
            .cwiseAbs()
            .maxCoeff();
    reports.push_back({"transform_orthogonality", dev, dev, 1e-12,
                       dev <= 1e-12});
  }
  {
    std::array<double, 4> c_neg = c;
    std::array<double, 6> w_neg = w;
    for (auto& x : c_neg) x = -x;
    for (auto& x : w_neg) x = -x;
    const DenseReal u_back = build_finite_transform(args.nmax, c_neg, w_neg);
    const double dev =
        (u * u_back - DenseReal::Identity(dim, dim)).cwiseAbs().maxCoeff();
    reports.push_back({"transform_roundtrip", dev, dev, 1e-10, dev <= 1e-10});
  }
  {
    // U(eps c) - (I + eps X) is second order; the bound below is the tail of
    // the exponential series in the 1-norm.
    const double eps = 1e-3;
    SparseReal x(dim, dim);
    for (int mu = 1; mu <= 4; ++mu) {
      if (c[std::size_t(mu - 1)] == 0.0) continue;
      x = SparseReal(x - c[std::size_t(mu - 1)] *
                             lift_to_axis(build_delta_sharp(args.nmax), mu, 4));
    }
    for (int i = 0; i < 6; ++i) {
      if (w[std::size_t(i)] == 0.0) continue;
      // Pair order matches J_upper: (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
      static constexpr int pairs[6][2] = {{1, 2}, {1, 3}, {1, 4},
                                          {2, 3}, {2, 4}, {3, 4}};
      x = SparseReal(x + w[std::size_t(i)] *
                             rotation_generator_real(args.nmax, pairs[i][0],
                                                     pairs[i][1]));
    }
    std::array<double, 4> c_eps = c;
    std::array<double, 6> w_eps = w;
    for (auto& v : c_eps) v *= eps;
    for (auto& v : w_eps) v *= eps;
    const DenseReal u_eps = build_finite_transform(args.nmax, c_eps, w_eps);
    const DenseReal first = DenseReal::Identity(dim, dim) + eps * DenseReal(x);
    const double dev = (u_eps - first).cwiseAbs().maxCoeff();
    const double xnorm = norm1(x);
    const double bound =
        0.5 * eps * eps * xnorm * xnorm * std::exp(eps * xnorm);
    reports.push_back({"first_order_consistency", dev, dev, bound,
                       dev <= bound});
  }

  // Exact translation invariance of the wave operator.
  {
    CheckReport report = check_kg_invariance_4d(args.nmax, args.mass, c,
                                                zero6, args.margin, 1e-10);
    reports.push_back(std::move(report));
  }

  if (args.nullcheck) {
    reports.push_back(
        check_null_vector_invariance_4d(args.nmax, args.mass, c, 1e-8));
  }

  // First-order boost invariance of the (3+1) evolution, with a rotation
  // control.
  {
    const BoostInvarianceReport boost_report = check_boost_invariance_3plus1(
        args.nmax, args.mass, b, static_cast<int>(args.steps));
    reports.push_back({"boost_residual_growth_slope", boost_report.slope,
                       boost_report.base_residual, boost_report.slope_floor,
                       boost_report.pass});
    const double rotation_tol = 2.0 * boost_report.base_residual;
    reports.push_back({"rotation_control_residual",
                       boost_report.rotation_residual,
                       boost_report.base_residual, rotation_tol,
                       boost_report.rotation_residual <= rotation_tol});

    Table growth;
    growth.columns = {"epsilon", "residual_growth"};
    for (int i = 0; i < 3; ++i) {
      growth.add_row(
          {format_double(boost_report.epsilons[std::size_t(i)]),
           format_double(boost_report.growths[std::size_t(i)])});
    }
    write_table(dir, "boost_growth", growth,
                parse_format(args.common.format_name));
  }

  return finish(dir, std::move(reports),
                {{"n_max", std::to_string(args.nmax)},
                 {"mass", format_double(args.mass)},
                 {"margin", std::to_string(args.margin)}});
}

// ---------------------------------------------------------------------------
// geometry

struct GeometryArgs {
  CommonOptions common;
  UnitOptions units;
  std::string nlist = "0,1,2,3,4";
  double energy = 0.5;
  int samples = 256;
  double tmin = 0.0;
  double tmax = 1.0;
  int tsamples = 64;
  CLI::Option* nlist_opt = nullptr;
  CLI::Option* energy_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* tmin_opt = nullptr;
  CLI::Option* tmax_opt = nullptr;
  CLI::Option* tsamples_opt = nullptr;
};

int cmd_geometry(GeometryArgs& args) {
  const ConfigMap config = load_config(args.common.config_path);
  reject_unknown_keys(config,
                      {"nlist", "energy", "samples", "tmin", "tmax",
                       "tsamples", "units", "hbar", "c", "l", "nu", "out",
                       "format"});
  args.common.resolve(config);
  const Constants constants = args.units.resolve(config);
  fill(args.nlist_opt, config, "nlist", args.nlist);
  fill(args.energy_opt, config, "energy", args.energy);
  fill(args.samples_opt, config, "samples", args.samples);
  fill(args.tmin_opt, config, "tmin", args.tmin);
  fill(args.tmax_opt, config, "tmax", args.tmax);
  fill(args.tsamples_opt, config, "tsamples", args.tsamples);

  const std::vector<int> levels = parse_int_list(args.nlist, "nlist");
  if (levels.empty()) throw UsageError("N list must not be empty");
  for (int level : levels) {
    if (level < 0) throw UsageError("levels must be nonnegative");
  }

  ManifestEntries entries = {{"nlist", join_list(levels)},
                             {"energy", format_double(args.energy)},
                             {"samples", std::to_string(args.samples)},
                             {"tmin", format_double(args.tmin)},
                             {"tmax", format_double(args.tmax)},
                             {"tsamples", std::to_string(args.tsamples)}};
  args.units.echo(entries, constants);
  entries.emplace_back("out", args.common.out_dir);
  entries.emplace_back("format", args.common.format_name);
  const fs::path dir =
      prepare_output(args.common.out_dir, "geometry", std::move(entries));
  const OutputFormat format = parse_format(args.common.format_name);

  std::vector<OrbitGeometry> circles;
  for (int level : levels) {
    circles.push_back(orbit_circle(level, args.samples));
  }
  const std::vector<OrbitGeometry> cells =
      confocal_phase_cells(levels, constants, args.samples);
  const OrbitGeometry ellipse =
      classical_ellipse(args.energy, constants, args.samples);
  std::vector<OrbitGeometry> cylinders;
  for (int level : levels) {
    cylinders.push_back(worldsheet_cylinder(level, args.tmin, args.tmax,
                                            args.samples, args.tsamples));
  }

  write_table(dir, "circles", orbit_table(circles), format);
  write_table(dir, "cells", orbit_table(cells), format);
  write_table(dir, "ellipse", orbit_table({ellipse}), format);
  write_table(dir, "cylinder", orbit_table(cylinders), format);

  {
    Table radii;
    radii.columns = {"N", "radius"};
    for (const auto& circle : circles) {
      radii.add_row(
          {std::to_string(circle.N), format_double(circle.radius)});
    }
    write_table(dir, "radii", radii, format);
  }

  // JSON parameter manifest alongside the key-value run manifest.
  {
    nlohmann::ordered_json parameters;
    parameters["subcommand"] = "geometry";
    parameters["nlist"] = levels;
    parameters["energy"] = args.energy;
    parameters["samples"] = args.samples;
    parameters["tmin"] = args.tmin;
    parameters["tmax"] = args.tmax;
    parameters["tsamples"] = args.tsamples;
    parameters["units"] = unit_mode_name(constants.mode);
    parameters["hbar"] = constants.hbar;
    parameters["c"] = constants.c;
    parameters["l"] = constants.l;
    parameters["nu"] = constants.nu;
    std::ofstream os(dir / "manifest.json");
    os << parameters.dump(2) << '\n';
  }

  // Every emitted point sits on its level set.
  std::vector<CheckReport> reports;
  const auto level_residual = [](const OrbitGeometry& orbit) {
    double worst = 0.0;
    for (const auto& point : orbit.points) {
      const double qn = point.q / orbit.q_max;
      const double pn = point.p / orbit.p_max;
      worst = std::max(worst, std::abs(qn * qn + pn * pn - 1.0));
    }
    return worst;
  };
  const auto push_levels = [&](const std::string& name,
                               const std::vector<OrbitGeometry>& orbits) {
    double worst = 0.0;
    for (const auto& orbit : orbits) {
      worst = std::max(worst, level_residual(orbit));
    }
    reports.push_back({name, worst, worst, 1e-12, worst <= 1e-12});
  };
  push_levels("circle_level_residual", circles);
  push_levels("cell_level_residual", cells);
  push_levels("ellipse_level_residual", {ellipse});
  push_levels("cylinder_level_residual", cylinders);

  if (constants.mode == UnitMode::fundamental) {
    // In fundamental units the confocal cells coincide pointwise with the
    // circles at the same levels.
    double worst = 0.0;
    for (std::size_t i = 0; i < circles.size(); ++i) {
      for (std::size_t j = 0; j < circles[i].points.size(); ++j) {
        worst = std::max(worst, std::abs(circles[i].points[j].q -
                                         cells[i].points[j].q));
        worst = std::max(worst, std::abs(circles[i].points[j].p -
                                         cells[i].points[j].p));
      }
    }
    reports.push_back(
        {"cell_circle_consistency", worst, worst, 0.0, worst <= 0.0});
  }

  return finish(dir, std::move(reports),
                {{"units", unit_mode_name(constants.mode)},
                 {"samples", std::to_string(args.samples)}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-phase-space quantum mechanics toolkit"};
  app.require_subcommand(1);

  OpsArgs ops;
  {
    CLI::App* cmd = app.add_subcommand(
        "ops-check", "Difference-operator structure and commutator checks");
    ops.common.attach(cmd);
    ops.nmax_opt = cmd->add_option("--nmax", ops.nmax, "Lattice cutoff");
    ops.margin_opt =
        cmd->add_option("--margin", ops.margin, "Interior margin");
    ops.tol_opt = cmd->add_option("--tol", ops.tol, "Interior tolerance");
  }

  OscArgs osc;
  {
    CLI::App* cmd = app.add_subcommand(
        "oscillator", "Discrete oscillator spectrum and eigenfunctions");
    osc.common.attach(cmd);
    osc.units.attach(cmd);
    osc.nmax_opt = cmd->add_option("--nmax", osc.nmax, "Lattice cutoff");
    osc.efn_opt = cmd->add_option("--efn", osc.efn,
                                  "Eigenfunction level to tabulate");
    osc.qmin_opt = cmd->add_option("--qmin", osc.qmin, "Tabulation start");
    osc.qmax_opt = cmd->add_option("--qmax", osc.qmax, "Tabulation end");
    osc.grid_opt =
        cmd->add_option("--gridpoints", osc.gridpoints, "Tabulation points");
  }

  KgArgs kg;
  {
    CLI::App* cmd = app.add_subcommand(
        "kg", "Lattice wave-equation evolution and residual checks");
    kg.common.attach(cmd);
    kg.nmax_opt = cmd->add_option("--nmax", kg.nmax, "Lattice cutoff");
    kg.mass_opt = cmd->add_option("--mass", kg.mass, "Field mass");
    kg.dt_opt = cmd->add_option("--dt", kg.dt, "Time step (default: auto)");
    kg.steps_opt = cmd->add_option("--steps", kg.steps, "Number of steps");
    kg.margin_opt = cmd->add_option("--margin", kg.margin, "Interior margin");
    kg.initial_opt = cmd->add_option(
        "--initial", kg.initial, "Initial data: eigenmode, random, or zero");
    kg.seed_opt = cmd->add_option("--seed", kg.seed, "Random preset seed");
    kg.stride_opt =
        cmd->add_option("--stride", kg.stride, "Output row stride");
  }

  PoincareArgs poincare;
  {
    CLI::App* cmd = app.add_subcommand(
        "poincare", "Symmetry generator and invariance checks");
    poincare.common.attach(cmd);
    poincare.nmax_opt =
        cmd->add_option("--nmax", poincare.nmax, "Lattice cutoff per axis");
    poincare.mass_opt = cmd->add_option("--mass", poincare.mass, "Field mass");
    poincare.steps_opt =
        cmd->add_option("--steps", poincare.steps, "Boost-check time steps");
    poincare.margin_opt =
        cmd->add_option("--margin", poincare.margin, "Interior margin");
    poincare.cmu_opt = cmd->add_option(
        "--cmu", poincare.cmu, "Translation parameters c1,c2,c3,c4");
    poincare.omega_opt = cmd->add_option(
        "--omega", poincare.omega,
        "Rotation parameters for pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)");
    poincare.boost_opt = cmd->add_option(
        "--boost", poincare.boost, "Boost direction b1,b2,b3");
    poincare.null_opt = cmd->add_flag(
        "--nullcheck", poincare.nullcheck,
        "Also verify translation invariance of the null eigenvector (slow)");
  }

  GeometryArgs geometry;
  {
    CLI::App* cmd = app.add_subcommand(
        "geometry", "Phase-space orbit and worldsheet exports");
    geometry.common.attach(cmd);
    geometry.units.attach(cmd);
    geometry.nlist_opt =
        cmd->add_option("--nlist", geometry.nlist, "Comma-separated levels");
    geometry.energy_opt = cmd->add_option(
        "--energy", geometry.energy, "Ellipse energy in units of hbar*nu");
    geometry.samples_opt =
        cmd->add_option("--samples", geometry.samples, "Angular samples");
    geometry.tmin_opt =
        cmd->add_option("--tmin", geometry.tmin, "Cylinder start time");
    geometry.tmax_opt =
        cmd->add_option("--tmax", geometry.tmax, "Cylinder end time");
    geometry.tsamples_opt =
        cmd->add_option("--tsamples", geometry.tsamples, "Time samples");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("ops-check")) return cmd_ops_check(ops);
    if (app.got_subcommand("oscillator")) return cmd_oscillator(osc);
    if (app.got_subcommand("kg")) return cmd_kg(kg);
    if (app.got_subcommand("poincare")) return cmd_poincare(poincare);
    if (app.got_subcommand("geometry")) return cmd_geometry(geometry);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const StabilityError& e) {
    std::fprintf(stderr, "stability error: %s\n", e.what());
    return 3;
  } catch (const MemoryBudgetError& e) {
    std::fprintf(stderr, "memory budget error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
