#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "esav/diagnostics.hpp"
#include "esav/integrator.hpp"
#include "test_support.hpp"

using namespace esav;
using esav::testing::square_grid;

namespace {
ComplexField plane(const PeriodicGrid& g, double omega, double t) {
  return ComplexField::sample(g, [&](std::span<const double> x) {
    return std::polar(1.0, x[0] + x[1] - omega * t);
  });
}
}  // namespace

TEST_CASE("first record has zero drift") {
  const auto g = square_grid(16);
  const ModelParams p{5.0, 1.0};
  const auto psi = plane(g, 6.0, 0.0);
  InvariantSeries series;
  series.record({psi, init_q(psi, p), 0.0}, p);
  REQUIRE(series.size() == 1);
  CHECK(series.rel_mass[0] == 0.0);
  CHECK(series.rel_energy[0] == 0.0);
  CHECK(series.rel_hamiltonian[0] == 0.0);
  CHECK(series.mass_is_relative);
}

TEST_CASE("exact plane-wave states keep relative drift at roundoff") {
  const auto g = square_grid(32);
  const ModelParams p{5.0, 1.0};
  InvariantSeries series;
  for (double t : {0.0, 1.3, 7.7}) {
    const auto psi = plane(g, 6.0, t);
    series.record({psi, init_q(psi, p), t}, p);
  }
  CHECK(series.size() == 3);
  CHECK(series.max_rel_mass() < 1e-14);
  CHECK(series.max_rel_energy() < 1e-14);
  CHECK(series.max_rel_hamiltonian() < 1e-14);
  for (const auto* v : {&series.mass, &series.modified_energy, &series.hamiltonian, &series.rel_mass})
    CHECK(v->size() == series.times.size());
}

TEST_CASE("zero baselines fall back to absolute drift") {
  const auto g = square_grid(8);
  const ModelParams p{5.0, 1.0};
  InvariantSeries series;
  series.record({ComplexField(g), 1.0, 0.0}, p);
  CHECK_FALSE(series.mass_is_relative);
  CHECK_FALSE(series.energy_is_relative);
  const ComplexField c(g, std::vector<cplx>(g.size(), 0.1));
  series.record({c, 1.0, 0.1}, p);
  CHECK(series.rel_mass[1] == doctest::Approx(mass(c)));
  CHECK(std::isfinite(series.rel_energy[1]));
}

TEST_CASE("linf_error examples") {
  const auto g = square_grid(16);
  const auto psi = plane(g, 6.0, 0.3);
  CHECK(linf_error(psi, psi) == 0.0);
  const double theta = 1e-3;
  const auto rotated = std::polar(1.0, theta) * psi;
  CHECK(linf_error(rotated, psi) == doctest::Approx(std::abs(std::polar(1.0, theta) - 1.0)).epsilon(1e-9));
  CHECK(linf_error(rotated, psi) == doctest::Approx(theta).epsilon(1e-6));
  CHECK_THROWS_AS(linf_error(psi, ComplexField(square_grid(8))), std::invalid_argument);
}

TEST_CASE("convergence_rate examples") {
  auto r = convergence_rate({16.0, 1.0}, {2.0, 1.0});
  CHECK_FALSE(r[0].has_value());
  CHECK(*r[1] == doctest::Approx(4.0));

  r = convergence_rate({3.16e-05, 3.91e-07}, {0.03, 0.01});
  CHECK(*r[1] == doctest::Approx(4.0).epsilon(0.003));

  r = convergence_rate({2.0, 2.0, 2.0}, {0.3, 0.2, 0.1});
  CHECK(*r[1] == 0.0);
  CHECK(*r[2] == 0.0);

  CHECK_THROWS_AS(convergence_rate({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_rate({1.0, 0.0}, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_rate({1.0, 2.0}, {1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(convergence_rate({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("convergence_rate is scale invariant") {
  const std::vector<double> errors = {3.1e-5, 6.3e-6, 1.9e-6, 4.0e-7};
  const std::vector<double> steps = {0.03, 0.02, 0.015, 0.01};
  const auto base = convergence_rate(errors, steps);
  for (double scale : {1e-3, 7.0, 1e4}) {
    std::vector<double> e = errors, h = steps;
    for (auto& v : e) v *= scale;
    for (auto& v : h) v *= scale;
    const auto by_error = convergence_rate(e, steps);
    const auto by_step = convergence_rate(errors, h);
    for (std::size_t j = 1; j < base.size(); ++j) {
      CHECK(*by_error[j] == doctest::Approx(*base[j]).epsilon(1e-12));
      CHECK(*by_step[j] == doctest::Approx(*base[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear problem stays exact over many steps") {
  const auto g = square_grid(16);
  const ModelParams p{0.0, 1.0};
  SolverConfig cfg;
  cfg.tableau = gauss_tableau(3);
  const double tau = 0.05;
  EsavRkStepper stepper(g, p, cfg, tau);
  SavState s{plane(g, 1.0, 0.0), 1.0, 0.0};
  for (int n = 1; n <= 200; ++n) {
    s = stepper.step(s);
    s.time = n * tau;
  }
  CHECK(linf_error(s.psi, plane(g, 1.0, s.time)) <= 1e-12);
}
