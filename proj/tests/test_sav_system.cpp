#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "esav/sav_system.hpp"
#include "test_support.hpp"

using namespace esav;
using esav::testing::square_grid;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArea = kTwoPi * kTwoPi;

ComplexField wave11(const PeriodicGrid& g, double amp = 1.0) {
  return ComplexField::sample(g, [&](std::span<const double> x) { return std::polar(amp, x[0] + x[1]); });
}

// Straight-line oracle formulas, written pointwise without the library helpers.
double oracle_denominator(const ComplexField& psi, double c0) {
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double r = std::abs(psi[i]);
    sum += r * r * r * r;
  }
  return std::sqrt(psi.grid().quad_weight() * sum + c0);
}

ComplexField oracle_k(const ComplexField& psi, double Q, double beta, double c0) {
  ComplexField out(psi.grid());
  const double den = oracle_denominator(psi, c0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double r2 = psi[i].real() * psi[i].real() + psi[i].imag() * psi[i].imag();
    const cplx v = r2 * psi[i];
    // -i * beta * v * Q / den
    out[i] = cplx{beta * v.imag() * Q / den, -beta * v.real() * Q / den};
  }
  return out;
}

double oracle_l(const ComplexField& psi, double c0) {
  const auto Lpsi = testing::direct_linear_op(psi);
  ComplexField minus_i_L(psi.grid());
  ComplexField v(psi.grid());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    minus_i_L[i] = cplx{0.0, -1.0} * Lpsi[i];
    v[i] = std::norm(psi[i]) * psi[i];
  }
  return 2.0 * testing::quadrature(minus_i_L, v).real() / oracle_denominator(psi, c0);
}
}  // namespace

TEST_CASE("ModelParams requires c0 > 0") {
  CHECK_THROWS_AS((ModelParams{5.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{5.0, -1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((ModelParams{5.0, 1e-8}.validate()));
}

TEST_CASE("init_q examples") {
  const auto g = square_grid(32);
  CHECK(init_q(wave11(g), {5.0, 1.0}) == doctest::Approx(std::sqrt(kArea + 1.0)).epsilon(1e-14));
  CHECK(init_q(wave11(g), {5.0, 1.0}) == doctest::Approx(6.36225).epsilon(1e-5));
  CHECK(init_q(ComplexField(g), {5.0, 1.0}) == 1.0);

  const auto psi = ComplexField::sample(g, [](std::span<const double> x) { return std::polar(2.0, x[0]); });
  const double q = init_q(psi, {5.0, 0.5});
  CHECK(q == doctest::Approx(oracle_denominator(psi, 0.5)).epsilon(1e-14));
  CHECK(q == doctest::Approx(std::sqrt(16.0 * kArea + 0.5)).epsilon(1e-13));
}

TEST_CASE("stage_k examples") {
  const auto g = square_grid(32);
  const ModelParams p{5.0, 1.0};
  CHECK(stage_k(ComplexField(g), 1.0, p).max_abs() == 0.0);

  const auto w = wave11(g);
  const auto k = stage_k(w, std::sqrt(kArea + 1.0), p);
  CHECK(testing::max_diff(k, cplx{0.0, -5.0} * w) < 1e-13);

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = testing::random_field(square_grid(8), rng);
    const double Q = 0.5 + trial;
    const auto expected = oracle_k(psi, Q, 3.7, 0.8);
    CHECK(testing::max_diff(stage_k(psi, Q, {3.7, 0.8}), expected) <= 1e-13 * expected.max_abs());
  }
}

TEST_CASE("stage_l examples") {
  const auto g = square_grid(32);
  const ModelParams p{5.0, 1.0};
  const ComplexField c(g, std::vector<cplx>(g.size(), cplx{1.5, 0.5}));
  CHECK(std::abs(stage_l(c, p)) < 1e-12);
  CHECK(std::abs(stage_l(wave11(g), p)) < 1e-12);

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = testing::random_field(square_grid(8), rng);
    const double expected = oracle_l(psi, 0.8);
    CHECK(stage_l(psi, {3.7, 0.8}) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("stage_slopes agrees with the separate evaluations") {
  std::mt19937_64 rng(44);
  const auto psi = testing::random_field(square_grid(8), rng);
  const ModelParams p{2.0, 1.5};
  ComplexField k(psi.grid());
  const double l = stage_slopes(psi, apply_linear_op(psi), 1.25, p, k);
  CHECK(l == doctest::Approx(stage_l(psi, p)).epsilon(1e-14));
  CHECK(testing::max_diff(k, stage_k(psi, 1.25, p)) <= 1e-15 * k.max_abs());
}

TEST_CASE("energies and mass examples") {
  const auto g = square_grid(32);
  const ModelParams p{5.0, 1.0};
  const auto w = wave11(g);

  const SavState s{w, std::sqrt(kArea + 1.0), 0.0};
  CHECK(modified_energy(s, p) == doctest::Approx(3.5 * kArea).epsilon(1e-13));
  CHECK(modified_energy(s, p) == doctest::Approx(138.174).epsilon(1e-5));
  CHECK(modified_energy(SavState{ComplexField(g), 1.0, 0.0}, p) == 0.0);

  CHECK(hamiltonian_energy(w, p) == doctest::Approx(3.5 * kArea).epsilon(1e-13));
  CHECK(hamiltonian_energy(ComplexField(g), p) == 0.0);

  CHECK(mass(w) == doctest::Approx(kArea).epsilon(1e-14));
  CHECK(mass(ComplexField(g)) == 0.0);
  std::mt19937_64 rng(9);
  const auto f = testing::random_field(g, rng);
  CHECK(mass(2.0 * f) == doctest::Approx(4.0 * mass(f)).epsilon(1e-14));
}

TEST_CASE("modified energy matches a term-by-term oracle") {
  std::mt19937_64 rng(45);
  const ModelParams p{4.0, 2.0};
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = testing::random_field(square_grid(8), rng);
    const double q = 1.0 + 0.3 * trial;
    const double kinetic = testing::quadrature(testing::direct_linear_op(psi), psi).real();
    const double expected = kinetic + 0.5 * p.beta * q * q - 0.5 * p.beta * p.c0;
    CHECK(modified_energy({psi, q, 0.0}, p) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("consistent q makes E equal H") {
  std::mt19937_64 rng(46);
  const ModelParams p{5.0, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = testing::smooth_random_field(square_grid(16), rng, 1.5);
    const SavState s{psi, init_q(psi, p), 0.0};
    CHECK(modified_energy(s, p) == doctest::Approx(hamiltonian_energy(psi, p)).epsilon(1e-12));
  }
}

TEST_CASE("gauge invariance, orthogonality and denominator bound") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const ModelParams p{5.0, 0.7};
  for (int trial = 0; trial < 20; ++trial) {
    const auto psi = testing::random_field(square_grid(8), rng);
    const cplx phase = std::polar(1.0, angle(rng));
    const double Q = 0.1 + trial;

    const double l = stage_l(psi, p);
    CHECK(stage_l(phase * psi, p) == doctest::Approx(l).epsilon(1e-12));

    const auto k = stage_k(psi, Q, p);
    CHECK(testing::max_diff(stage_k(phase * psi, Q, p), phase * k) <= 1e-12 * k.max_abs());

    ComplexField v(psi.grid());
    const double den = sav_denominator(psi, p);
    for (std::size_t i = 0; i < psi.size(); ++i) v[i] = std::norm(psi[i]) * psi[i] / den;
    const double bracket = 2.0 * inner_product(k, v).real();
    CHECK(std::abs(bracket) <= 1e-12 * norm(k) * norm(v));

    CHECK(den >= std::sqrt(p.c0));
  }
}

TEST_CASE("checked_real rejects imaginary residue") {
  CHECK(checked_real({2.0, 1e-14}, 1.0, "x") == 2.0);
  CHECK_THROWS_AS(checked_real({2.0, 1e-6}, 1.0, "x"), NumericalError);
}
