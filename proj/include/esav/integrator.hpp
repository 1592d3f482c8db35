#pragma once

// Exponential SAV Runge-Kutta (ESAV-RK) time stepping.
//
// Stage equations, for stage i of an s-stage tableau (A, b, c):
//   Psi_i = exp(-iL c_i tau) psi^n + tau sum_j a_ij exp(iL (c_j - c_i) tau) k_j
//   Q_i   = q^n + tau sum_j a_ij l_j
// with k_j = stage_k(Psi_j, Q_j) and l_j = stage_l(Psi_j). The update is
//   psi^{n+1} = exp(-iL tau) psi^n + tau sum_i b_i exp(-iL (1 - c_i) tau) k_i
//   q^{n+1}   = q^n + tau sum_i b_i l_i.
// When the tableau satisfies b_i a_ij + b_j a_ji = b_i b_j, mass (psi, psi) and
// the modified energy (L psi, psi) + beta/2 q^2 - beta/2 C0 are conserved up to
// the stage-solver residual.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "esav/grid.hpp"
#include "esav/sav_system.hpp"
#include "esav/tableau.hpp"

namespace esav {

struct SolverConfig {
  double tol = 1e-13;
  int max_iters = 200;
  RkTableau tableau = gauss_tableau(2);

  void validate() const;
};

/// Picard iteration on the implicit stages did not reach `tol`.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(int iterations, double residual, std::optional<std::int64_t> step = std::nullopt);

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  std::optional<std::int64_t> step() const { return step_; }

  NonConvergence at_step(std::int64_t step) const { return {iterations_, residual_, step}; }

 private:
  int iterations_;
  double residual_;
  std::optional<std::int64_t> step_;
};

struct StageSet {
  std::vector<ComplexField> Psi;
  std::vector<double> Q;
  std::vector<ComplexField> k;
  std::vector<double> l;
  int sweeps = 0;
  double residual = 0.0;
};

/// Steps with a fixed tau, caching every propagator phase table the stage
/// equations need. Immutable after construction apart from scratch buffers, so
/// one instance per trajectory.
class EsavRkStepper {
 public:
  EsavRkStepper(PeriodicGrid grid, ModelParams params, SolverConfig cfg, double tau);

  StageSet solve_stages(const SavState& state);
  SavState step(const SavState& state);

  double tau() const { return tau_; }
  const SolverConfig& config() const { return cfg_; }
  const ModelParams& params() const { return params_; }
  /// Sweeps used by the most recent stage solve.
  int last_sweeps() const { return last_sweeps_; }

 private:
  using Spectrum = std::vector<cplx>;

  Spectrum phase_table(double t) const;
  void evaluate_slopes(StageSet& stages, std::vector<Spectrum>& k_hat);

  PeriodicGrid grid_;
  ModelParams params_;
  SolverConfig cfg_;
  double tau_;
  int s_;

  // exp(-iL c_i tau), exp(iL (c_j - c_i) tau), exp(-iL (1 - c_i) tau), exp(-iL tau)
  std::vector<Spectrum> to_stage_;
  std::vector<Spectrum> coupling_;  // row-major s x s
  std::vector<Spectrum> to_end_;
  Spectrum full_;

  Spectrum psi_hat_;
  std::vector<Spectrum> stage_hat_;
  ComplexField work_;
  int last_sweeps_ = 0;
};

StageSet solve_stages(const SavState& state, double tau, const ModelParams& params,
                      const SolverConfig& cfg);

SavState esav_rk_step(const SavState& state, double tau, const ModelParams& params,
                      const SolverConfig& cfg);

/// Independent oracle: applies the tableau to the Lawson variable
/// u = exp(iL t) psi, built only from the public field operations, and maps back
/// with exp(-iL (t_n + tau)). Agrees with esav_rk_step up to roundoff.
SavState lawson_reference_step(const SavState& state, double t_n, double tau,
                               const ModelParams& params, const SolverConfig& cfg);

}  // namespace esav
