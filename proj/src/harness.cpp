#include "esav/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace esav {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Accepts plain numbers plus `pi`, `2pi` and `2*pi` forms.
double parse_double(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.resize(s.size() - 2);
    if (!s.empty() && s.back() == '*') s.pop_back();
    if (s.empty()) return factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("config: bad number for '" + key + "': " + raw);
  return v * factor;
}

int parse_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("config: bad integer for '" + key + "': " + raw);
  return v;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& raw, F&& parse_one) {
  std::vector<T> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_one(key, item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dims", "lengths",  "nodes",   "beta",      "c0", "stages",    "scheme",
      "tau",  "t_final",  "ic",      "k1",        "k2", "k3",        "modulation",
      "ic_file", "tol",   "max_iters", "stride",  "taus", "outdir"};
  return keys;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "dims") cfg.dims = parse_int(key, value);
  else if (key == "lengths") cfg.lengths = parse_list<double>(key, value, parse_double);
  else if (key == "nodes") cfg.nodes = parse_list<int>(key, value, parse_int);
  else if (key == "beta") cfg.beta = parse_double(key, value);
  else if (key == "c0") cfg.c0 = parse_double(key, value);
  else if (key == "stages") cfg.stages = parse_int(key, value);
  else if (key == "scheme") cfg.scheme = trim(value);
  else if (key == "tau") cfg.tau = parse_double(key, value);
  else if (key == "t_final") cfg.t_final = parse_double(key, value);
  else if (key == "ic") cfg.ic = trim(value);
  else if (key == "k1") cfg.wave[0] = parse_int(key, value);
  else if (key == "k2") cfg.wave[1] = parse_int(key, value);
  else if (key == "k3") cfg.wave[2] = parse_int(key, value);
  else if (key == "modulation") cfg.modulation = parse_double(key, value);
  else if (key == "ic_file") cfg.ic_file = trim(value);
  else if (key == "tol") cfg.tol = parse_double(key, value);
  else if (key == "max_iters") cfg.max_iters = parse_int(key, value);
  else if (key == "stride") cfg.stride = parse_int(key, value);
  else if (key == "taus") cfg.taus = parse_list<double>(key, value, parse_double);
  else if (key == "outdir") cfg.outdir = trim(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  const auto num = [](double v) { return fmt17(v); };
  const auto integer = [](int v) { return std::to_string(v); };
  std::ostringstream out;
  out << "dims = " << cfg.dims << "\n";
  if (!cfg.lengths.empty()) out << "lengths = " << join(cfg.lengths, num) << "\n";
  if (!cfg.nodes.empty()) out << "nodes = " << join(cfg.nodes, integer) << "\n";
  out << "beta = " << fmt17(cfg.beta) << "\n"
      << "c0 = " << fmt17(cfg.c0) << "\n"
      << "stages = " << cfg.stages << "\n"
      << "scheme = " << cfg.scheme << "\n"
      << "tau = " << fmt17(cfg.tau) << "\n"
      << "t_final = " << fmt17(cfg.t_final) << "\n"
      << "ic = " << cfg.ic << "\n"
      << "k1 = " << cfg.wave[0] << "\n"
      << "k2 = " << cfg.wave[1] << "\n"
      << "k3 = " << cfg.wave[2] << "\n"
      << "modulation = " << fmt17(cfg.modulation) << "\n";
  if (!cfg.ic_file.empty()) out << "ic_file = " << cfg.ic_file << "\n";
  out << "tol = " << fmt17(cfg.tol) << "\n"
      << "max_iters = " << cfg.max_iters << "\n"
      << "stride = " << cfg.stride << "\n";
  if (!cfg.taus.empty()) out << "taus = " << join(cfg.taus, num) << "\n";
  if (!cfg.outdir.empty()) out << "outdir = " << cfg.outdir << "\n";
  return out.str();
}

std::vector<double> RunConfig::axis_lengths() const {
  return lengths.empty() ? std::vector<double>(static_cast<std::size_t>(dims), 2.0 * std::numbers::pi)
                         : lengths;
}

std::vector<int> RunConfig::axis_nodes() const {
  return nodes.empty() ? std::vector<int>(static_cast<std::size_t>(dims), 16) : nodes;
}

void RunConfig::validate() {
  if (dims != 2 && dims != 3) throw std::invalid_argument("config: dims must be 2 or 3");
  lengths = axis_lengths();
  nodes = axis_nodes();
  if (lengths.size() != static_cast<std::size_t>(dims) || nodes.size() != static_cast<std::size_t>(dims))
    throw std::invalid_argument("config: lengths and nodes need one entry per axis");
  if (!std::isfinite(beta)) throw std::invalid_argument("config: beta must be finite");
  if (!(c0 > 0.0)) throw std::invalid_argument("config: c0 must be positive");
  if (scheme != "gauss" && scheme != "explicit_euler")
    throw std::invalid_argument("config: scheme must be gauss or explicit_euler");
  if (scheme == "gauss" && (stages < 1 || stages > 3))
    throw std::invalid_argument("config: stages must be 1, 2 or 3");
  if (!(tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
  if (!(t_final > 0.0)) throw std::invalid_argument("config: t_final must be positive");
  if (ic != "plane_wave" && ic != "modulated" && ic != "file")
    throw std::invalid_argument("config: ic must be plane_wave, modulated or file");
  if (ic == "file" && ic_file.empty()) throw std::invalid_argument("config: ic=file needs ic_file");
  if (ic != "file") {
    for (int a = 0; a < dims; ++a) {
      // |k| < N/2, plus one mode of headroom for the cos x modulation on axis 0.
      const int reach = std::abs(wave[a]) + (ic == "modulated" && a == 0 ? 1 : 0);
      if (nodes[a] >= 4 && reach >= nodes[a] / 2)
        throw std::invalid_argument("config: wave index not resolvable on axis " + std::to_string(a + 1));
    }
  }
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  if (stride < 1) throw std::invalid_argument("config: stride must be >= 1");
  for (std::size_t j = 0; j < taus.size(); ++j) {
    if (!(taus[j] > 0.0)) throw std::invalid_argument("config: taus must be positive");
    if (j > 0 && !(taus[j] < taus[j - 1]))
      throw std::invalid_argument("config: taus must be sorted descending");
  }
}

std::int64_t step_count(double t_final, double tau) {
  const double ratio = t_final / tau;
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest)
    return static_cast<std::int64_t>(nearest);
  const auto truncated = static_cast<std::int64_t>(std::floor(ratio));
  if (truncated < 1) throw std::invalid_argument("step_count: tau exceeds t_final");
  std::cerr << "warning: t_final/tau = " << ratio << " is not an integer; running "
            << truncated << " steps to t = " << truncated * tau << "\n";
  return truncated;
}

// ---------------------------------------------------------------------------
// initial data

PlaneWaveSpec plane_wave_spec(std::vector<int> k, double beta) {
  double k2 = 0.0;
  for (int ka : k) k2 += static_cast<double>(ka) * ka;
  return {std::move(k), 0.5 * k2 + beta};
}

ComplexField plane_wave(const PeriodicGrid& grid, const PlaneWaveSpec& spec, double t) {
  if (static_cast<int>(spec.k.size()) < grid.dims())
    throw std::invalid_argument("plane_wave: wave vector has too few components");
  const auto lengths = grid.lengths();
  const auto nodes = grid.nodes();
  for (int a = 0; a < grid.dims(); ++a)
    if (2 * std::abs(spec.k[a]) >= nodes[a])
      throw std::invalid_argument("plane_wave: wave index not resolvable on the grid");
  return ComplexField::sample(grid, [&](std::span<const double> x) {
    double phase = -spec.omega * t;
    for (int a = 0; a < grid.dims(); ++a)
      phase += 2.0 * std::numbers::pi * spec.k[a] / lengths[a] * x[a];
    return std::polar(1.0, phase);
  });
}

PeriodicGrid make_grid(const RunConfig& cfg) {
  return build_grid(cfg.dims, cfg.axis_lengths(), cfg.axis_nodes());
}

ModelParams make_params(const RunConfig& cfg) {
  ModelParams p{cfg.beta, cfg.c0};
  p.validate();
  return p;
}

SolverConfig make_solver(const RunConfig& cfg) {
  SolverConfig s;
  s.tol = cfg.tol;
  s.max_iters = cfg.max_iters;
  s.tableau = cfg.scheme == "explicit_euler" ? explicit_euler_tableau() : gauss_tableau(cfg.stages);
  s.validate();
  return s;
}

namespace {

std::vector<int> active_wave(const RunConfig& cfg) {
  return {cfg.wave.begin(), cfg.wave.begin() + cfg.dims};
}

ComplexField load_samples(const PeriodicGrid& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open initial-condition file " + path);
  std::vector<cplx> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream fields(line);
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> re)) continue;
    if (!(fields >> im)) throw std::runtime_error("initial-condition file: expected 're im' pairs");
    values.emplace_back(re, im);
  }
  if (values.size() != grid.size())
    throw std::runtime_error("initial-condition file has " + std::to_string(values.size()) +
                             " samples, grid needs " + std::to_string(grid.size()));
  return ComplexField(grid, std::move(values));
}

}  // namespace

ComplexField initial_field(const PeriodicGrid& grid, const RunConfig& cfg) {
  if (cfg.ic == "file") return load_samples(grid, cfg.ic_file);
  const auto spec = plane_wave_spec(active_wave(cfg), cfg.beta);
  ComplexField psi = plane_wave(grid, spec, 0.0);
  if (cfg.ic == "modulated") {
    const double l1 = grid.lengths()[0];
    const auto shape = ComplexField::sample(grid, [&](std::span<const double> x) {
      return cplx{1.0 + cfg.modulation * std::cos(2.0 * std::numbers::pi * x[0] / l1), 0.0};
    });
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= shape[i];
  }
  return psi;
}

std::optional<ComplexField> exact_solution(const PeriodicGrid& grid, const RunConfig& cfg, double t) {
  if (cfg.ic != "plane_wave") return std::nullopt;
  return plane_wave(grid, plane_wave_spec(active_wave(cfg), cfg.beta), t);
}

// ---------------------------------------------------------------------------
// experiments

RunResult run_single(const RunConfig& config) {
  RunConfig cfg = config;
  cfg.validate();
  const auto grid = make_grid(cfg);
  const auto params = make_params(cfg);
  EsavRkStepper stepper(grid, params, make_solver(cfg), cfg.tau);

  const std::int64_t steps = step_count(cfg.t_final, cfg.tau);
  SavState state{initial_field(grid, cfg), 0.0, 0.0};
  state.q = init_q(state.psi, params);

  RunResult result{state, {}, steps, std::nullopt};
  result.series.record(state, params);
  for (std::int64_t n = 1; n <= steps; ++n) {
    try {
      state = stepper.step(state);
    } catch (const NonConvergence& e) {
      throw e.at_step(n);
    }
    state.time = static_cast<double>(n) * cfg.tau;
    if (!state.psi.all_finite() || !std::isfinite(state.q))
      throw NumericalError("non-finite state at step " + std::to_string(n));
    if (n % cfg.stride == 0 || n == steps) result.series.record(state, params);
  }

  if (const auto exact = exact_solution(grid, cfg, state.time))
    result.linf_error = linf_error(state.psi, *exact);
  result.final_state = std::move(state);

  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    write_invariants_csv(std::filesystem::path(cfg.outdir) / "invariants.csv", result.series);
    if (result.linf_error) {
      std::ofstream out(std::filesystem::path(cfg.outdir) / "final_error.txt");
      out << "linf_error = " << fmt17(*result.linf_error) << "\n"
          << "steps = " << steps << "\n"
          << "t = " << fmt17(result.final_state.time) << "\n";
    }
  }
  return result;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::vector<double> tau_ladder) {
  if (tau_ladder.size() < 2) throw std::invalid_argument("run_convergence: need at least two step sizes");
  RunConfig cfg = config;
  cfg.taus = tau_ladder;
  cfg.validate();
  if (cfg.ic != "plane_wave")
    throw std::invalid_argument("run_convergence: needs plane-wave initial data (exact solution)");

  std::vector<ConvergenceRow> rows;
  for (double tau : tau_ladder) {
    RunConfig one = cfg;
    one.tau = tau;
    one.outdir.clear();
    one.stride = std::numeric_limits<int>::max();
    const auto result = run_single(one);
    rows.push_back({tau, *result.linf_error, std::nullopt, *result.linf_error <= kRoundoffFloor});
  }
  for (std::size_t j = 1; j < rows.size(); ++j) {
    if (rows[j - 1].at_floor || rows[j].at_floor) continue;
    rows[j].rate = convergence_rate({rows[j - 1].error, rows[j].error}, {rows[j - 1].tau, rows[j].tau})[1];
  }

  if (!cfg.outdir.empty()) {
    std::filesystem::create_directories(cfg.outdir);
    write_convergence_csv(std::filesystem::path(cfg.outdir) / "convergence.csv", rows);
  }
  return rows;
}

InvariantSeries run_conservation(const RunConfig& cfg) {
  auto result = run_single(cfg);
  if (!cfg.outdir.empty()) write_plot_script(cfg.outdir);
  return std::move(result.series);
}

// ---------------------------------------------------------------------------
// output

void write_invariants_csv(const std::filesystem::path& path, const InvariantSeries& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,M,E,H,RM,RE,RH\n";
  for (std::size_t n = 0; n < s.size(); ++n) {
    out << fmt17(s.times[n]) << ',' << fmt17(s.mass[n]) << ',' << fmt17(s.modified_energy[n]) << ','
        << fmt17(s.hamiltonian[n]) << ',' << fmt17(s.rel_mass[n]) << ',' << fmt17(s.rel_energy[n])
        << ',' << fmt17(s.rel_hamiltonian[n]) << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "tau,linf_error,rate\n";
  for (const auto& row : rows) {
    out << fmt17(row.tau) << ',' << fmt17(row.error) << ',';
    if (row.at_floor) out << "floor";
    else if (row.rate) out << fmt17(*row.rate);
    else out << '*';
    out << '\n';
  }
}

void write_plot_script(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "plot_invariants.py");
  if (!out) throw std::runtime_error("cannot write plot script in " + dir.string());
  out << R"(#!/usr/bin/env python3
# Relative drift of mass (RM), modified energy (RE) and Hamiltonian (RH).
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
src = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "invariants.csv")
rows = list(csv.DictReader(open(src)))[1:]
t = [float(r["t"]) for r in rows]

fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
for ax, key, label in zip(axes, ("RM", "RE", "RH"),
                          ("mass", "modified energy", "Hamiltonian")):
    ax.semilogy(t, [max(float(r[key]), 1e-18) for r in rows])
    ax.set_title(f"{key}: relative {label} error")
    ax.set_xlabel("t")
fig.tight_layout()
fig.savefig(os.path.join(here, "invariants.png"), dpi=150)
)";
}

}  // namespace esav
