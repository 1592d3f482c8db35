#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "esav/tableau.hpp"

using namespace esav;

namespace {

// Order conditions for Gauss collocation: B(2s): sum b_i c_i^{k-1} = 1/k, k <= 2s;
// C(s): sum_j a_ij c_j^{k-1} = c_i^k / k, k <= s.
double order_defect(const RkTableau& t) {
  double defect = 0.0;
  for (int k = 1; k <= 2 * t.stages; ++k) {
    double sum = 0.0;
    for (int i = 0; i < t.stages; ++i) sum += t.b[i] * std::pow(t.c[i], k - 1);
    defect = std::max(defect, std::abs(sum - 1.0 / k));
  }
  for (int i = 0; i < t.stages; ++i)
    for (int k = 1; k <= t.stages; ++k) {
      double sum = 0.0;
      for (int j = 0; j < t.stages; ++j) sum += t.A(i, j) * std::pow(t.c[j], k - 1);
      defect = std::max(defect, std::abs(sum - std::pow(t.c[i], k) / k));
    }
  return defect;
}

// y' = lambda y over [0, 1]; stages by fixed-point iteration.
std::complex<double> integrate_linear(const RkTableau& t, std::complex<double> lambda, int steps) {
  const double h = 1.0 / steps;
  std::complex<double> y = 1.0;
  for (int n = 0; n < steps; ++n) {
    std::vector<std::complex<double>> K(t.stages, lambda * y);
    for (int it = 0; it < 200; ++it) {
      std::vector<std::complex<double>> next(t.stages);
      for (int i = 0; i < t.stages; ++i) {
        std::complex<double> Y = y;
        for (int j = 0; j < t.stages; ++j) Y += h * t.A(i, j) * K[j];
        next[i] = lambda * Y;
      }
      K = next;
    }
    for (int i = 0; i < t.stages; ++i) y += h * t.b[i] * K[i];
  }
  return y;
}

}  // namespace

TEST_CASE("gauss1 is the implicit midpoint rule") {
  const auto t = gauss_tableau(1);
  CHECK(t.A(0, 0) == 0.5);
  CHECK(t.b[0] == 1.0);
  CHECK(t.c[0] == 0.5);
  CHECK(check_symplectic(t) == 0.0);

  const std::complex<double> lambda{-0.5, 2.0};
  const auto exact = std::exp(lambda);
  const double e1 = std::abs(integrate_linear(t, lambda, 20) - exact);
  const double e2 = std::abs(integrate_linear(t, lambda, 40) - exact);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("gauss2 coefficients") {
  const auto t = gauss_tableau(2);
  const double r3 = std::sqrt(3.0);
  CHECK(t.b[0] == 0.5);
  CHECK(t.b[1] == 0.5);
  CHECK(std::abs(t.c[0] - (0.5 - r3 / 6)) <= 1e-15);
  CHECK(std::abs(t.c[1] - (0.5 + r3 / 6)) <= 1e-15);
  CHECK(t.A(0, 0) == 0.25);
  CHECK(t.A(0, 1) == doctest::Approx(0.25 - r3 / 6).epsilon(1e-15));
  CHECK(t.A(1, 0) == doctest::Approx(0.25 + r3 / 6).epsilon(1e-15));
  CHECK(t.A(1, 1) == 0.25);
  CHECK(check_symplectic(t) <= 1e-15);
  CHECK(order_defect(t) <= 1e-15);
}

TEST_CASE("gauss3 coefficients") {
  const auto t = gauss_tableau(3);
  const double r15 = std::sqrt(15.0);
  CHECK(t.b[0] == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  CHECK(t.b[1] == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(t.b[2] == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  CHECK(std::abs(t.c[0] - (0.5 - r15 / 10)) <= 1e-15);
  CHECK(std::abs(t.c[1] - 0.5) <= 1e-15);
  CHECK(std::abs(t.c[2] - (0.5 + r15 / 10)) <= 1e-15);
  CHECK(check_symplectic(t) <= 1e-15);
  CHECK(order_defect(t) <= 2e-15);
}

TEST_CASE("gauss tableaus reach order 2s on a linear problem") {
  const std::complex<double> lambda{-0.3, 1.5};
  const auto exact = std::exp(lambda);
  for (int s = 1; s <= 3; ++s) {
    const auto t = gauss_tableau(s);
    const double e1 = std::abs(integrate_linear(t, lambda, 4) - exact);
    const double e2 = std::abs(integrate_linear(t, lambda, 8) - exact);
    CAPTURE(s);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0 * s).epsilon(0.05));
  }
}

TEST_CASE("tableau invariants") {
  for (int s = 1; s <= 3; ++s) {
    const auto t = gauss_tableau(s);
    double bsum = 0.0;
    for (int i = 0; i < s; ++i) {
      double row = 0.0;
      for (int j = 0; j < s; ++j) row += t.A(i, j);
      CHECK(std::abs(row - t.c[i]) <= 1e-14);
      bsum += t.b[i];
    }
    CHECK(std::abs(bsum - 1.0) <= 1e-14);
  }
}

TEST_CASE("explicit Euler violates the symplectic condition") {
  const auto t = explicit_euler_tableau();
  CHECK(check_symplectic(t) == 1.0);
}

TEST_CASE("unsupported and malformed tableaus") {
  CHECK_THROWS_AS(gauss_tableau(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_tableau(4), std::invalid_argument);
  RkTableau bad{"bad", 1, {0.25}, {1.0}, {0.5}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RkTableau weights{"weights", 1, {0.5}, {0.9}, {0.5}};
  CHECK_THROWS_AS(weights.validate(), std::invalid_argument);
}
