#pragma once

// Scalar-auxiliary-variable form of the cubic NLS equation
//   i psi_t = L psi + beta |psi|^2 psi,   L = -1/2 Laplacian,
// with q = sqrt((psi^2, psi^2) + C0) carried as an extra unknown.

#include <stdexcept>
#include <string>

#include "esav/grid.hpp"

namespace esav {

struct ModelParams {
  double beta = 0.0;
  double c0 = 1.0;

  void validate() const;
};

struct SavState {
  ComplexField psi;
  double q = 1.0;
  double time = 0.0;
};

/// Raised when a quantity that must be real carries an imaginary part above
/// the 1e-12 relative budget, which points at a non-self-adjoint operator.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (psi^2, psi^2) = w * sum |psi|^4.
double quartic_integral(const ComplexField& psi);

/// sqrt((psi^2, psi^2) + C0); always >= sqrt(C0).
double sav_denominator(const ComplexField& psi, const ModelParams& params);

/// Consistent initial auxiliary variable q(0).
double init_q(const ComplexField& psi0, const ModelParams& params);

/// k = -i beta |Psi|^2 Psi Q / sqrt((Psi^2,Psi^2) + C0).
ComplexField stage_k(const ComplexField& Psi, double Q, const ModelParams& params);

/// l = 2 Re(-i L Psi, |Psi|^2 Psi) / sqrt((Psi^2,Psi^2) + C0).
double stage_l(const ComplexField& Psi, const ModelParams& params);

/// Both slopes from one pass, given L Psi precomputed. `k_out` is overwritten.
double stage_slopes(const ComplexField& Psi, const ComplexField& L_Psi, double Q,
                    const ModelParams& params, ComplexField& k_out);

double mass(const ComplexField& psi);

/// (L psi, psi), checked real.
double kinetic_energy(const ComplexField& psi);

/// E = (L psi, psi) + beta/2 q^2 - beta/2 C0.
double modified_energy(const SavState& state, const ModelParams& params);

/// H = (L psi, psi) + beta/2 (psi^2, psi^2).
double hamiltonian_energy(const ComplexField& psi, const ModelParams& params);

/// Returns z.real() after checking |z.imag()| <= 1e-12 * scale.
double checked_real(cplx z, double scale, const std::string& what);

}  // namespace esav
