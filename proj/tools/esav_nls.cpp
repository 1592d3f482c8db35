// esav_nls: command-line driver for the ESAV-RK NLS solver.
//
//   esav_nls run|converge|conserve|check-tableau [--config FILE] [--key value ...]

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "esav/harness.hpp"
#include "esav/tableau.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_config_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "flat key = value configuration file");
  for (const auto& key : esav::config_keys())
    cmd->add_option("--" + key, ov.values[key], "override config key '" + key + "'");
}

esav::RunConfig resolve(const Overrides& ov, CLI::App* cmd) {
  esav::RunConfig cfg = ov.config_path.empty() ? esav::RunConfig{} : esav::load_config(ov.config_path);
  for (const auto& [key, value] : ov.values)
    if (cmd->count("--" + key) > 0) esav::apply_override(cfg, key, value);
  cfg.validate();
  return cfg;
}

int cmd_run(const esav::RunConfig& cfg) {
  const auto result = esav::run_single(cfg);
  std::printf("steps       %lld\n", static_cast<long long>(result.steps));
  std::printf("t_final     %.17g\n", result.final_state.time);
  std::printf("max RM      %.3e\n", result.series.max_rel_mass());
  std::printf("max RE      %.3e\n", result.series.max_rel_energy());
  std::printf("max RH      %.3e\n", result.series.max_rel_hamiltonian());
  if (result.linf_error) std::printf("linf_error  %.3e\n", *result.linf_error);
  return 0;
}

int cmd_converge(const esav::RunConfig& cfg) {
  if (cfg.taus.size() < 2) {
    std::cerr << "converge: set --taus to a descending list of at least two step sizes\n";
    return 2;
  }
  const auto rows = esav::run_convergence(cfg, cfg.taus);
  std::printf("%10s  %12s  %6s\n", "tau", "linf_error", "rate");
  for (const auto& row : rows) {
    std::printf("%10.5g  %12.3e  ", row.tau, row.error);
    if (row.at_floor) std::printf("%6s\n", "floor");
    else if (row.rate) std::printf("%6.2f\n", *row.rate);
    else std::printf("%6s\n", "*");
  }
  return 0;
}

int cmd_conserve(const esav::RunConfig& cfg) {
  const auto series = esav::run_conservation(cfg);
  std::printf("records     %zu\n", series.size());
  std::printf("max RM      %.3e\n", series.max_rel_mass());
  std::printf("max RE      %.3e\n", series.max_rel_energy());
  std::printf("max RH      %.3e\n", series.max_rel_hamiltonian());
  if (!cfg.outdir.empty())
    std::printf("wrote %s/invariants.csv and plot_invariants.py\n", cfg.outdir.c_str());
  return 0;
}

int cmd_check_tableau(const esav::RunConfig& cfg) {
  const auto t = cfg.scheme == "explicit_euler" ? esav::explicit_euler_tableau()
                                                : esav::gauss_tableau(cfg.stages);
  std::printf("%s (s = %d)\n", t.name.c_str(), t.stages);
  for (int i = 0; i < t.stages; ++i) {
    std::printf("  c=%+.17f |", t.c[i]);
    for (int j = 0; j < t.stages; ++j) std::printf(" %+.17f", t.A(i, j));
    std::printf("\n");
  }
  std::printf("  b =");
  for (double b : t.b) std::printf(" %.17f", b);
  std::printf("\nsymplectic defect %.3e\n", esav::check_symplectic(t));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ESAV-RK solver for the cubic nonlinear Schrodinger equation"};
  app.require_subcommand(1);

  Overrides run_ov, conv_ov, cons_ov, tab_ov;
  auto* run = app.add_subcommand("run", "single run; reports invariant drift and final error");
  auto* converge = app.add_subcommand("converge", "temporal convergence study over --taus");
  auto* conserve = app.add_subcommand("conserve", "invariant time series and plot script");
  auto* tableau = app.add_subcommand("check-tableau", "print a tableau and its symplectic defect");
  add_config_options(run, run_ov);
  add_config_options(converge, conv_ov);
  add_config_options(conserve, cons_ov);
  add_config_options(tableau, tab_ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(resolve(run_ov, run));
    if (*converge) return cmd_converge(resolve(conv_ov, converge));
    if (*conserve) return cmd_conserve(resolve(cons_ov, conserve));
    if (*tableau) return cmd_check_tableau(resolve(tab_ov, tableau));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
