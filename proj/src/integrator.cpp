#include "esav/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace esav {

namespace {

std::string nonconvergence_message(int iterations, double residual,
                                   std::optional<std::int64_t> step) {
  std::ostringstream msg;
  msg << "stage iteration did not converge after " << iterations << " sweeps (residual "
      << residual << ")";
  if (step) msg << " at step " << *step;
  return msg.str();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// max_i |new_i - old_i| / (1 + max_i |new_i|); +inf once anything is non-finite,
// since std::max would silently drop a NaN.
double relative_change(std::span<const cplx> next, std::span<const cplx> prev) {
  double diff = 0.0;
  double mag = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double d = std::abs(next[i] - prev[i]);
    const double m = std::abs(next[i]);
    if (!std::isfinite(d) || !std::isfinite(m)) return kInf;
    diff = std::max(diff, d);
    mag = std::max(mag, m);
  }
  return diff / (1.0 + mag);
}

double relative_change(double next, double prev) {
  const double r = std::abs(next - prev) / (1.0 + std::abs(next));
  return std::isfinite(r) ? r : kInf;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  tableau.validate();
}

NonConvergence::NonConvergence(int iterations, double residual, std::optional<std::int64_t> step)
    : std::runtime_error(nonconvergence_message(iterations, residual, step)),
      iterations_(iterations),
      residual_(residual),
      step_(step) {}

// ---------------------------------------------------------------------------

EsavRkStepper::EsavRkStepper(PeriodicGrid grid, ModelParams params, SolverConfig cfg, double tau)
    : grid_(std::move(grid)),
      params_(params),
      cfg_(std::move(cfg)),
      tau_(tau),
      s_(cfg_.tableau.stages),
      work_(grid_) {
  params_.validate();
  cfg_.validate();
  if (!(tau_ > 0.0) || !std::isfinite(tau_))
    throw std::invalid_argument("EsavRkStepper: tau must be positive");

  const auto& c = cfg_.tableau.c;
  for (int i = 0; i < s_; ++i) {
    to_stage_.push_back(phase_table(-c[i] * tau_));
    to_end_.push_back(phase_table(-(1.0 - c[i]) * tau_));
    for (int j = 0; j < s_; ++j) coupling_.push_back(phase_table((c[j] - c[i]) * tau_));
  }
  full_ = phase_table(-tau_);
  psi_hat_.resize(grid_.size());
  stage_hat_.assign(static_cast<std::size_t>(s_), Spectrum(grid_.size()));
}

EsavRkStepper::Spectrum EsavRkStepper::phase_table(double t) const {
  const auto lambda = grid_.symbol();
  Spectrum out(lambda.size());
  for (std::size_t m = 0; m < lambda.size(); ++m) out[m] = std::polar(1.0, lambda[m] * t);
  return out;
}

// Fills k, l (and their spectra) from the current stage values. stage_hat_
// must hold the spectra of stages.Psi.
void EsavRkStepper::evaluate_slopes(StageSet& stages, std::vector<Spectrum>& k_hat) {
  const auto lambda = grid_.symbol();
  auto lpsi = work_.values();
  for (int i = 0; i < s_; ++i) {
    const auto& hat = stage_hat_[i];
    for (std::size_t m = 0; m < hat.size(); ++m) lpsi[m] = lambda[m] * hat[m];
    grid_.inverse(lpsi, lpsi);
    stages.l[i] = stage_slopes(stages.Psi[i], work_, stages.Q[i], params_, stages.k[i]);
    grid_.forward(stages.k[i].values(), k_hat[i]);
  }
}

StageSet EsavRkStepper::solve_stages(const SavState& state) {
  if (!state.psi.grid().same_as(grid_))
    throw std::invalid_argument("EsavRkStepper: state lives on a different grid");
  const auto n = grid_.size();
  const auto& t = cfg_.tableau;

  grid_.forward(state.psi.values(), psi_hat_);

  StageSet stages;
  stages.Q.assign(static_cast<std::size_t>(s_), state.q);
  stages.l.assign(static_cast<std::size_t>(s_), 0.0);
  for (int i = 0; i < s_; ++i) {
    for (std::size_t m = 0; m < n; ++m) stage_hat_[i][m] = to_stage_[i][m] * psi_hat_[m];
    ComplexField Psi(grid_);
    grid_.inverse(stage_hat_[i], Psi.values());
    stages.Psi.push_back(std::move(Psi));
    stages.k.emplace_back(grid_);
  }

  std::vector<Spectrum> k_hat(static_cast<std::size_t>(s_), Spectrum(n));
  ComplexField next(grid_);
  bool converged = false;
  double residual = 0.0;
  int sweep = 0;
  while (sweep < cfg_.max_iters) {
    ++sweep;
    evaluate_slopes(stages, k_hat);

    residual = 0.0;
    std::vector<double> next_Q(static_cast<std::size_t>(s_));
    for (int i = 0; i < s_; ++i) {
      next_Q[i] = state.q;
      for (int j = 0; j < s_; ++j) next_Q[i] += tau_ * t.A(i, j) * stages.l[j];
    }
    for (int i = 0; i < s_; ++i) {
      auto& hat = stage_hat_[i];
      for (std::size_t m = 0; m < n; ++m) {
        cplx acc = to_stage_[i][m] * psi_hat_[m];
        for (int j = 0; j < s_; ++j)
          acc += (tau_ * t.A(i, j)) * coupling_[static_cast<std::size_t>(i * s_ + j)][m] *
                 k_hat[j][m];
        hat[m] = acc;
      }
      grid_.inverse(hat, next.values());
      residual = std::max(residual, relative_change(next.values(), stages.Psi[i].values()));
      residual = std::max(residual, relative_change(next_Q[i], stages.Q[i]));
      std::swap(stages.Psi[i], next);
    }
    stages.Q = std::move(next_Q);

    if (!std::isfinite(residual)) break;
    if (residual <= cfg_.tol) {
      converged = true;
      break;
    }
  }
  last_sweeps_ = sweep;
  stages.sweeps = sweep;
  stages.residual = residual;
  if (!converged) throw NonConvergence(sweep, residual);

  evaluate_slopes(stages, k_hat);
  return stages;
}

SavState EsavRkStepper::step(const SavState& state) {
  StageSet stages = solve_stages(state);
  const auto n = grid_.size();
  const auto& t = cfg_.tableau;

  // solve_stages does not hand back the k spectra.
  std::vector<Spectrum> k_hat(static_cast<std::size_t>(s_), Spectrum(n));
  for (int i = 0; i < s_; ++i) grid_.forward(stages.k[i].values(), k_hat[i]);

  Spectrum out(n);
  for (std::size_t m = 0; m < n; ++m) {
    cplx acc = full_[m] * psi_hat_[m];
    for (int i = 0; i < s_; ++i) acc += (tau_ * t.b[i]) * to_end_[i][m] * k_hat[i][m];
    out[m] = acc;
  }
  SavState next{ComplexField(grid_), state.q, state.time + tau_};
  grid_.inverse(out, next.psi.values());
  for (int i = 0; i < s_; ++i) next.q += tau_ * t.b[i] * stages.l[i];
  return next;
}

StageSet solve_stages(const SavState& state, double tau, const ModelParams& params,
                      const SolverConfig& cfg) {
  EsavRkStepper stepper(state.psi.grid(), params, cfg, tau);
  return stepper.solve_stages(state);
}

SavState esav_rk_step(const SavState& state, double tau, const ModelParams& params,
                      const SolverConfig& cfg) {
  EsavRkStepper stepper(state.psi.grid(), params, cfg, tau);
  return stepper.step(state);
}

// ---------------------------------------------------------------------------

SavState lawson_reference_step(const SavState& state, double t_n, double tau,
                               const ModelParams& params, const SolverConfig& cfg) {
  params.validate();
  cfg.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("lawson_reference_step: tau must be positive");
  const auto& t = cfg.tableau;
  const int s = t.stages;

  const ComplexField u = exp_propagate(state.psi, t_n);
  std::vector<ComplexField> U(static_cast<std::size_t>(s), u);
  std::vector<double> Q(static_cast<std::size_t>(s), state.q);
  std::vector<ComplexField> kt(static_cast<std::size_t>(s), ComplexField(u.grid()));
  std::vector<double> l(static_cast<std::size_t>(s), 0.0);

  auto slopes = [&] {
    for (int i = 0; i < s; ++i) {
      const double ti = t_n + t.c[i] * tau;
      const ComplexField Psi = exp_propagate(U[i], -ti);
      kt[i] = exp_propagate(stage_k(Psi, Q[i], params), ti);
      l[i] = stage_l(Psi, params);
    }
  };

  bool converged = false;
  double residual = 0.0;
  int sweep = 0;
  while (sweep < cfg.max_iters) {
    ++sweep;
    slopes();
    residual = 0.0;
    for (int i = 0; i < s; ++i) {
      ComplexField Ui = u;
      double Qi = state.q;
      for (int j = 0; j < s; ++j) {
        Ui += (tau * t.A(i, j)) * kt[j];
        Qi += tau * t.A(i, j) * l[j];
      }
      residual = std::max(residual, relative_change(Ui.values(), U[i].values()));
      residual = std::max(residual, relative_change(Qi, Q[i]));
      U[i] = std::move(Ui);
      Q[i] = Qi;
    }
    if (!std::isfinite(residual)) break;
    if (residual <= cfg.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NonConvergence(sweep, residual);
  slopes();

  ComplexField u_next = u;
  double q_next = state.q;
  for (int i = 0; i < s; ++i) {
    u_next += (tau * t.b[i]) * kt[i];
    q_next += tau * t.b[i] * l[i];
  }
  return SavState{exp_propagate(u_next, -(t_n + tau)), q_next, state.time + tau};
}

}  // namespace esav
