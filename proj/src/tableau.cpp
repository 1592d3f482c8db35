#include "esav/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esav {

void RkTableau::validate() const {
  const auto s = static_cast<std::size_t>(stages);
  if (stages < 1 || a.size() != s * s || b.size() != s || c.size() != s)
    throw std::invalid_argument("RkTableau '" + name + "': inconsistent sizes");
  double bsum = 0.0;
  for (int i = 0; i < stages; ++i) {
    double row = 0.0;
    for (int j = 0; j < stages; ++j) row += A(i, j);
    if (std::abs(row - c[i]) > 1e-14)
      throw std::invalid_argument("RkTableau '" + name + "': c_i != sum_j a_ij");
    bsum += b[i];
  }
  if (std::abs(bsum - 1.0) > 1e-14)
    throw std::invalid_argument("RkTableau '" + name + "': weights do not sum to 1");
}

RkTableau gauss_tableau(int s) {
  RkTableau t;
  t.stages = s;
  switch (s) {
    case 1:
      t.name = "gauss1";
      t.a = {0.5};
      t.b = {1.0};
      t.c = {0.5};
      break;
    case 2: {
      const double r3 = std::sqrt(3.0);
      t.name = "gauss2";
      t.a = {0.25, 0.25 - r3 / 6.0,  //
             0.25 + r3 / 6.0, 0.25};
      t.b = {0.5, 0.5};
      t.c = {0.5 - r3 / 6.0, 0.5 + r3 / 6.0};
      break;
    }
    case 3: {
      const double r15 = std::sqrt(15.0);
      t.name = "gauss3";
      t.a = {5.0 / 36.0,         2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0,  //
             5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0,          5.0 / 36.0 - r15 / 24.0,  //
             5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0};
      t.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
      t.c = {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0};
      break;
    }
    default:
      throw std::invalid_argument("gauss_tableau: only 1, 2 or 3 stages are supported");
  }
  // Row sums of the closed forms differ from c by a few ulps; take c from A.
  for (int i = 0; i < s; ++i) {
    double row = 0.0;
    for (int j = 0; j < s; ++j) row += t.A(i, j);
    t.c[i] = row;
  }
  t.validate();
  return t;
}

RkTableau explicit_euler_tableau() {
  RkTableau t{"explicit_euler", 1, {0.0}, {1.0}, {0.0}};
  t.validate();
  return t;
}

double check_symplectic(const RkTableau& t) {
  double defect = 0.0;
  for (int i = 0; i < t.stages; ++i)
    for (int j = 0; j < t.stages; ++j)
      defect = std::max(defect, std::abs(t.b[i] * t.A(i, j) + t.b[j] * t.A(j, i) - t.b[i] * t.b[j]));
  return defect;
}

}  // namespace esav
