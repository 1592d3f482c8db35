#pragma once

// Periodic tensor-product grids, complex grid functions and the
// Fourier-diagonal operators L = -1/2 Laplacian and exp(i L t).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace esav {

using cplx = std::complex<double>;

/// Uniform periodic grid on [0,l1] x ... x [0,ld], d in {2,3}.
///
/// Nodes are x_j = j*l/N, j = 0..N-1, stored row-major with the last axis
/// fastest. Wavenumbers follow k_m = 2*pi*m/l for m = -N/2..N/2-1. The grid is
/// an immutable handle; copies share the FFT plans and symbol tables and may be
/// used from several threads at once.
class PeriodicGrid {
 public:
  PeriodicGrid(std::vector<double> lengths, std::vector<int> nodes);

  int dims() const;
  std::span<const double> lengths() const;
  std::span<const int> nodes() const;
  std::size_t size() const;
  double quad_weight() const;
  double volume() const;

  /// Wavenumbers of one axis in natural order (m = -N/2 .. N/2-1).
  std::span<const double> wavenumbers(int axis) const;

  /// Wavenumber of one axis at an FFT storage index (0, 1, ..., -1).
  double wavenumber_at(int axis, int fft_index) const;

  /// Symbol of L = -1/2 Laplacian, lambda_K = 1/2 sum_a k_a^2, in FFT storage order.
  std::span<const double> symbol() const;

  /// Node coordinate along one axis.
  double coordinate(int axis, int index) const;

  /// Unnormalized forward DFT. `in` and `out` may alias.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Inverse DFT scaled by 1/size(), so inverse(forward(f)) == f.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  bool same_as(const PeriodicGrid& other) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Checked constructor; `dims` must match the sizes of `lengths` and `nodes`.
PeriodicGrid build_grid(int dims, std::vector<double> lengths, std::vector<int> nodes);

/// Complex grid function tied to a grid.
class ComplexField {
 public:
  explicit ComplexField(PeriodicGrid grid);
  ComplexField(PeriodicGrid grid, std::vector<cplx> values);

  /// Samples f(x) where x holds dims() coordinates.
  template <class F>
  static ComplexField sample(const PeriodicGrid& grid, F&& f);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;
  double max_abs() const;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cplx factor);

 private:
  PeriodicGrid grid_;
  std::vector<cplx> values_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(cplx factor, ComplexField a);

/// Throws std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const ComplexField& f, const ComplexField& g);

/// Discrete (f, g) = w * sum f * conj(g), linear in f.
cplx inner_product(const ComplexField& f, const ComplexField& g);

/// sqrt((f, f)).
double norm(const ComplexField& f);

/// L f = -1/2 Laplacian f, applied spectrally.
ComplexField apply_linear_op(const ComplexField& f);

/// exp(i L t) f: mode K is multiplied by exp(i lambda_K t).
ComplexField exp_propagate(const ComplexField& f, double t);

template <class F>
ComplexField ComplexField::sample(const PeriodicGrid& grid, F&& f) {
  ComplexField out(grid);
  const auto n = grid.nodes();
  const int d = grid.dims();
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    for (int a = 0; a < d; ++a) x[a] = grid.coordinate(a, idx[a]);
    out[flat] = f(std::span<const double>(x));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < n[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace esav
