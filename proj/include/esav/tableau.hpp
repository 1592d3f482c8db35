#pragma once

#include <string>
#include <vector>

namespace esav {

/// Butcher tableau with A stored row-major.
struct RkTableau {
  std::string name;
  int stages = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double A(int i, int j) const { return a[static_cast<std::size_t>(i * stages + j)]; }

  /// Checks sizes, c_i = sum_j a_ij and sum b_i = 1 to 1e-14.
  void validate() const;
};

/// s-stage Gauss collocation method of order 2s, s in {1, 2, 3}.
RkTableau gauss_tableau(int s);

/// Forward Euler; violates the symplectic condition. Used as a negative control.
RkTableau explicit_euler_tableau();

/// max_ij |b_i a_ij + b_j a_ji - b_i b_j|.
double check_symplectic(const RkTableau& t);

}  // namespace esav
