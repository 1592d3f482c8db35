#include "esav/sav_system.hpp"

#include <cmath>
#include <sstream>

namespace esav {

namespace {
constexpr double kImagResidueTol = 1e-12;
}

void ModelParams::validate() const {
  if (!std::isfinite(beta)) throw std::invalid_argument("ModelParams: beta must be finite");
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw std::invalid_argument("ModelParams: c0 must be strictly positive");
}

double checked_real(cplx z, double scale, const std::string& what) {
  const double budget = kImagResidueTol * std::max(scale, std::abs(z.real()));
  if (std::abs(z.imag()) > budget) {
    std::ostringstream msg;
    msg << what << ": imaginary residue " << z.imag() << " exceeds " << budget;
    throw NumericalError(msg.str());
  }
  return z.real();
}

double quartic_integral(const ComplexField& psi) {
  double sum = 0.0;
  for (const auto& z : psi.values()) {
    const double a2 = std::norm(z);
    sum += a2 * a2;
  }
  return psi.grid().quad_weight() * sum;
}

double sav_denominator(const ComplexField& psi, const ModelParams& params) {
  return std::sqrt(quartic_integral(psi) + params.c0);
}

double init_q(const ComplexField& psi0, const ModelParams& params) {
  params.validate();
  const double radicand = quartic_integral(psi0) + params.c0;
  if (!(radicand > 0.0)) throw NumericalError("init_q: non-positive radicand");
  return std::sqrt(radicand);
}

ComplexField stage_k(const ComplexField& Psi, double Q, const ModelParams& params) {
  ComplexField k(Psi.grid());
  const double scale = params.beta * Q / sav_denominator(Psi, params);
  const auto in = Psi.values();
  auto out = k.values();
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = cplx{0.0, -scale} * std::norm(in[i]) * in[i];
  return k;
}

double stage_l(const ComplexField& Psi, const ModelParams& params) {
  ComplexField k(Psi.grid());
  return stage_slopes(Psi, apply_linear_op(Psi), 1.0, params, k);
}

double stage_slopes(const ComplexField& Psi, const ComplexField& L_Psi, double Q,
                    const ModelParams& params, ComplexField& k_out) {
  require_same_grid(Psi, L_Psi);
  require_same_grid(Psi, k_out);
  const auto psi = Psi.values();
  const auto lpsi = L_Psi.values();
  auto k = k_out.values();

  double quartic = 0.0;
  for (const auto& z : psi) {
    const double a2 = std::norm(z);
    quartic += a2 * a2;
  }
  const double w = Psi.grid().quad_weight();
  const double den = std::sqrt(w * quartic + params.c0);

  // Re(-i Lpsi, v) with v = |psi|^2 psi; k is -i beta Q/den * v.
  const cplx minus_i{0.0, -1.0};
  cplx bracket{0.0, 0.0};
  const double k_scale = params.beta * Q / den;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const cplx v = std::norm(psi[i]) * psi[i];
    bracket += (minus_i * lpsi[i]) * std::conj(v);
    k[i] = minus_i * k_scale * v;
  }
  return 2.0 * (w * bracket).real() / den;
}

double mass(const ComplexField& psi) {
  return checked_real(inner_product(psi, psi), 0.0, "mass");
}

double kinetic_energy(const ComplexField& psi) {
  const auto lpsi = apply_linear_op(psi);
  return checked_real(inner_product(lpsi, psi), norm(lpsi) * norm(psi), "(L psi, psi)");
}

double modified_energy(const SavState& state, const ModelParams& params) {
  return kinetic_energy(state.psi) + 0.5 * params.beta * state.q * state.q -
         0.5 * params.beta * params.c0;
}

double hamiltonian_energy(const ComplexField& psi, const ModelParams& params) {
  return kinetic_energy(psi) + 0.5 * params.beta * quartic_integral(psi);
}

}  // namespace esav
