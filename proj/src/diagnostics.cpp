#include "esav/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esav {

namespace {

double drift(double value, double baseline, bool relative) {
  const double d = std::abs(value - baseline);
  return relative ? d / std::abs(baseline) : d;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

void InvariantSeries::record(const SavState& state, const ModelParams& params) {
  // E and H share (L psi, psi); evaluate it once.
  const double m = esav::mass(state.psi);
  const double kinetic = kinetic_energy(state.psi);
  const double e = kinetic + 0.5 * params.beta * (state.q * state.q - params.c0);
  const double h = kinetic + 0.5 * params.beta * quartic_integral(state.psi);

  if (empty()) {
    mass_is_relative = m != 0.0;
    energy_is_relative = e != 0.0;
    hamiltonian_is_relative = h != 0.0;
  }
  times.push_back(state.time);
  mass.push_back(m);
  modified_energy.push_back(e);
  hamiltonian.push_back(h);
  rel_mass.push_back(drift(m, mass.front(), mass_is_relative));
  rel_energy.push_back(drift(e, modified_energy.front(), energy_is_relative));
  rel_hamiltonian.push_back(drift(h, hamiltonian.front(), hamiltonian_is_relative));
}

double InvariantSeries::max_rel_mass() const { return max_of(rel_mass); }
double InvariantSeries::max_rel_energy() const { return max_of(rel_energy); }
double InvariantSeries::max_rel_hamiltonian() const { return max_of(rel_hamiltonian); }

double linf_error(const ComplexField& psi, const ComplexField& exact) {
  require_same_grid(psi, exact);
  double err = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) err = std::max(err, std::abs(psi[i] - exact[i]));
  return err;
}

std::vector<std::optional<double>> convergence_rate(const std::vector<double>& errors,
                                                    const std::vector<double>& steps) {
  if (errors.size() != steps.size() || errors.size() < 2)
    throw std::invalid_argument("convergence_rate: need two or more (error, step) pairs");
  for (std::size_t j = 0; j < errors.size(); ++j)
    if (!(errors[j] > 0.0) || !(steps[j] > 0.0))
      throw std::invalid_argument("convergence_rate: errors and steps must be positive");

  std::vector<std::optional<double>> rates(errors.size());
  for (std::size_t j = 1; j < errors.size(); ++j)
    rates[j] = std::log(errors[j - 1] / errors[j]) / std::log(steps[j - 1] / steps[j]);
  return rates;
}

}  // namespace esav
