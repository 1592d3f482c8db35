#pragma once

// Experiment driver: configuration, exact plane waves and the single-run,
// convergence and conservation studies with their CSV outputs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esav/diagnostics.hpp"
#include "esav/grid.hpp"
#include "esav/integrator.hpp"
#include "esav/sav_system.hpp"

namespace esav {

struct RunConfig {
  int dims = 2;
  std::vector<double> lengths;  // empty: 2*pi per axis
  std::vector<int> nodes;       // empty: 16 per axis
  double beta = 5.0;
  double c0 = 1.0;
  int stages = 2;
  std::string scheme = "gauss";  // gauss | explicit_euler
  double tau = 0.01;
  double t_final = 1.0;
  std::string ic = "plane_wave";  // plane_wave | modulated | file
  std::vector<int> wave = {1, 1, 1};
  double modulation = 0.5;
  std::string ic_file;
  double tol = 1e-13;
  int max_iters = 200;
  int stride = 1;
  std::vector<double> taus;  // convergence ladder
  std::string outdir;        // empty: no files written

  bool operator==(const RunConfig&) const = default;

  /// Fills defaulted axes and checks every field; throws std::invalid_argument.
  void validate();
  std::vector<double> axis_lengths() const;
  std::vector<int> axis_nodes() const;
};

/// Parses flat `key = value` text; '#' starts a comment. Unknown keys throw.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
std::string serialize_config(const RunConfig& cfg);
const std::vector<std::string>& config_keys();

/// Number of steps for [0, t_final]; non-integral ratios are truncated with a
/// warning to stderr.
std::int64_t step_count(double t_final, double tau);

struct PlaneWaveSpec {
  std::vector<int> k;
  double omega = 0.0;
};

/// omega = |k|^2 / 2 + beta.
PlaneWaveSpec plane_wave_spec(std::vector<int> k, double beta);

/// exp(i (k . x - omega t)) sampled on the grid.
ComplexField plane_wave(const PeriodicGrid& grid, const PlaneWaveSpec& spec, double t);

PeriodicGrid make_grid(const RunConfig& cfg);
ModelParams make_params(const RunConfig& cfg);
SolverConfig make_solver(const RunConfig& cfg);

/// psi0 per cfg.ic; for `modulated`, exp(i k.x) (1 + modulation cos x).
ComplexField initial_field(const PeriodicGrid& grid, const RunConfig& cfg);

/// Exact solution at time t when one is known (plane-wave initial data).
std::optional<ComplexField> exact_solution(const PeriodicGrid& grid, const RunConfig& cfg,
                                           double t);

struct RunResult {
  SavState final_state;
  InvariantSeries series;
  std::int64_t steps = 0;
  std::optional<double> linf_error;
};

RunResult run_single(const RunConfig& cfg);

struct ConvergenceRow {
  double tau = 0.0;
  double error = 0.0;
  std::optional<double> rate;
  bool at_floor = false;
};

/// Errors at or below this are reported as roundoff floor and get no rate.
inline constexpr double kRoundoffFloor = 1e-12;

std::vector<ConvergenceRow> run_convergence(const RunConfig& cfg, std::vector<double> tau_ladder);

InvariantSeries run_conservation(const RunConfig& cfg);

void write_invariants_csv(const std::filesystem::path& path, const InvariantSeries& series);
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows);
void write_plot_script(const std::filesystem::path& dir);

}  // namespace esav
