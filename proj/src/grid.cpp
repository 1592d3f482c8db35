#include "esav/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace esav {

namespace {

// The FFTW planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

struct PeriodicGrid::Impl {
  std::vector<double> lengths;
  std::vector<int> nodes;
  std::vector<std::vector<double>> wavenumbers;  // natural order per axis
  std::vector<double> symbol;                    // FFT storage order
  std::size_t size = 1;
  double quad_weight = 1.0;
  fftw_plan forward_plan = nullptr;
  fftw_plan inverse_plan = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan) fftw_destroy_plan(forward_plan);
    if (inverse_plan) fftw_destroy_plan(inverse_plan);
  }

  double wavenumber_at(int axis, int i) const {
    const int n = nodes[axis];
    const int m = i < n / 2 ? i : i - n;
    return 2.0 * std::numbers::pi * m / lengths[axis];
  }
};

PeriodicGrid::PeriodicGrid(std::vector<double> lengths, std::vector<int> nodes) {
  if (lengths.size() != nodes.size() || lengths.size() < 2 || lengths.size() > 3)
    throw std::invalid_argument("PeriodicGrid: need 2 or 3 axes with matching lengths/nodes");
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    if (nodes[a] < 4 || nodes[a] % 2 != 0)
      throw std::invalid_argument("PeriodicGrid: node count " + std::to_string(nodes[a]) +
                                  " must be even and >= 4");
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw std::invalid_argument("PeriodicGrid: domain lengths must be positive");
  }

  auto impl = std::make_shared<Impl>();
  impl->lengths = std::move(lengths);
  impl->nodes = std::move(nodes);
  const int d = static_cast<int>(impl->nodes.size());

  for (int a = 0; a < d; ++a) {
    const int n = impl->nodes[a];
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int m = -n / 2; m < n / 2; ++m)
      k[static_cast<std::size_t>(m + n / 2)] = 2.0 * std::numbers::pi * m / impl->lengths[a];
    impl->wavenumbers.push_back(std::move(k));
    impl->size *= static_cast<std::size_t>(n);
    impl->quad_weight *= impl->lengths[a] / n;
  }

  impl->symbol.resize(impl->size);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < impl->size; ++flat) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double k = impl->wavenumber_at(a, idx[a]);
      k2 += k * k;
    }
    impl->symbol[flat] = 0.5 * k2;
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < impl->nodes[a]) break;
      idx[a] = 0;
    }
  }

  {
    std::lock_guard lock(planner_mutex());
    std::vector<cplx> scratch(impl->size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl->forward_plan = fftw_plan_dft(d, impl->nodes.data(), as_fftw(scratch.data()),
                                       as_fftw(scratch.data()), FFTW_FORWARD, flags);
    impl->inverse_plan = fftw_plan_dft(d, impl->nodes.data(), as_fftw(scratch.data()),
                                       as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  }
  if (!impl->forward_plan || !impl->inverse_plan)
    throw std::runtime_error("PeriodicGrid: FFTW planning failed");
  impl_ = std::move(impl);
}

PeriodicGrid build_grid(int dims, std::vector<double> lengths, std::vector<int> nodes) {
  if (dims != 2 && dims != 3) throw std::invalid_argument("build_grid: dims must be 2 or 3");
  if (static_cast<int>(lengths.size()) != dims || static_cast<int>(nodes.size()) != dims)
    throw std::invalid_argument("build_grid: lengths and nodes must have `dims` entries");
  return PeriodicGrid(std::move(lengths), std::move(nodes));
}

int PeriodicGrid::dims() const { return static_cast<int>(impl_->nodes.size()); }
std::span<const double> PeriodicGrid::lengths() const { return impl_->lengths; }
std::span<const int> PeriodicGrid::nodes() const { return impl_->nodes; }
std::size_t PeriodicGrid::size() const { return impl_->size; }
double PeriodicGrid::quad_weight() const { return impl_->quad_weight; }

double PeriodicGrid::volume() const {
  double v = 1.0;
  for (double l : impl_->lengths) v *= l;
  return v;
}

std::span<const double> PeriodicGrid::wavenumbers(int axis) const {
  return impl_->wavenumbers.at(static_cast<std::size_t>(axis));
}

double PeriodicGrid::wavenumber_at(int axis, int fft_index) const {
  return impl_->wavenumber_at(axis, fft_index);
}

std::span<const double> PeriodicGrid::symbol() const { return impl_->symbol; }

double PeriodicGrid::coordinate(int axis, int index) const {
  return impl_->lengths[axis] * index / impl_->nodes[axis];
}

void PeriodicGrid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != size() || out.size() != size())
    throw std::invalid_argument("PeriodicGrid::forward: size mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_dft(impl_->forward_plan, as_fftw(out.data()), as_fftw(out.data()));
}

void PeriodicGrid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != size() || out.size() != size())
    throw std::invalid_argument("PeriodicGrid::inverse: size mismatch");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_dft(impl_->inverse_plan, as_fftw(out.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(size());
  for (auto& v : out) v *= scale;
}

bool PeriodicGrid::same_as(const PeriodicGrid& other) const {
  return impl_ == other.impl_ ||
         (impl_->nodes == other.impl_->nodes && impl_->lengths == other.impl_->lengths);
}

// ---------------------------------------------------------------------------

ComplexField::ComplexField(PeriodicGrid grid) : grid_(std::move(grid)), values_(grid_.size()) {}

ComplexField::ComplexField(PeriodicGrid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("ComplexField: value count does not match grid size");
}

bool ComplexField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const auto& z : values_) m = std::max(m, std::abs(z));
  return m;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(cplx factor, ComplexField a) { return a *= factor; }

void require_same_grid(const ComplexField& f, const ComplexField& g) {
  if (!f.grid().same_as(g.grid())) throw std::invalid_argument("fields live on different grids");
}

cplx inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f, g);
  cplx sum{0.0, 0.0};
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t i = 0; i < fv.size(); ++i) sum += fv[i] * std::conj(gv[i]);
  return f.grid().quad_weight() * sum;
}

double norm(const ComplexField& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

ComplexField apply_linear_op(const ComplexField& f) {
  const auto& grid = f.grid();
  ComplexField out(grid);
  grid.forward(f.values(), out.values());
  const auto lambda = grid.symbol();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= lambda[i];
  grid.inverse(out.values(), out.values());
  return out;
}

ComplexField exp_propagate(const ComplexField& f, double t) {
  if (t == 0.0) return f;
  const auto& grid = f.grid();
  ComplexField out(grid);
  grid.forward(f.values(), out.values());
  const auto lambda = grid.symbol();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::polar(1.0, lambda[i] * t);
  grid.inverse(out.values(), out.values());
  return out;
}

}  // namespace esav
