#pragma once

#include <optional>
#include <vector>

#include "esav/grid.hpp"
#include "esav/sav_system.hpp"

namespace esav {

/// Time series of M, E, H and their drifts |(X^n - X^0)/X^0|.
///
/// If a baseline value is exactly zero the corresponding rel_* column holds the
/// absolute drift |X^n - X^0| instead; `*_is_relative` says which.
struct InvariantSeries {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> modified_energy;
  std::vector<double> hamiltonian;
  std::vector<double> rel_mass;
  std::vector<double> rel_energy;
  std::vector<double> rel_hamiltonian;
  bool mass_is_relative = true;
  bool energy_is_relative = true;
  bool hamiltonian_is_relative = true;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  /// Appends the invariants of `state`; the first call fixes the baseline.
  void record(const SavState& state, const ModelParams& params);

  double max_rel_mass() const;
  double max_rel_energy() const;
  double max_rel_hamiltonian() const;
};

/// max over nodes of |psi - exact|.
double linf_error(const ComplexField& psi, const ComplexField& exact);

/// Rate_j = ln(e_{j-1}/e_j) / ln(h_{j-1}/h_j); slot 0 is empty.
std::vector<std::optional<double>> convergence_rate(const std::vector<double>& errors,
                                                    const std::vector<double>& steps);

}  // namespace esav
