#include "metasymp/grid.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "metasymp/errors.hpp"
#include "metasymp/simd/kernels.hpp"
#include "metasymp/tolerances.hpp"

namespace metasymp {

void GridSpec::validate() const {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DimensionError("grid x_max must be positive");
  if (N < 32 || !std::has_single_bit(N)) throw DimensionError("grid N must be a power of two >= 32");
}

GridSpec basis_grid(std::size_t n_basis) {
  GridSpec g;
  g.x_max = std::sqrt(2.0 * static_cast<double>(n_basis)) + 5.0;
  g.N = 256;
  while (g.dx() > 0.021) g.N *= 2;
  return g;
}

GridFunction::GridFunction(GridSpec grid) : grid_(grid), values_(grid.N) { grid_.validate(); }

GridFunction::GridFunction(GridSpec grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.N) throw DimensionError("grid function needs exactly N samples");
}

double GridFunction::norm() const { return std::sqrt(grid_.dx() * simd::norm2(values_)); }

Complex GridFunction::inner(const GridFunction& g) const {
  require_same_grid(g);
  return grid_.dx() * simd::dotc(values_, g.values_);
}

double GridFunction::distance(const GridFunction& g) const {
  require_same_grid(g);
  double s = 0.0;
  for (std::size_t j = 0; j < values_.size(); ++j) s += std::norm(values_[j] - g.values_[j]);
  return std::sqrt(grid_.dx() * s);
}

double GridFunction::tail_fraction() const {
  const double total = simd::norm2(values_);
  if (total == 0.0) return 0.0;
  const std::size_t edge = grid_.N / 32;
  std::span<const Complex> all(values_);
  return (simd::norm2(all.first(edge)) + simd::norm2(all.last(edge))) / total;
}

GridFunction& GridFunction::operator+=(const GridFunction& g) {
  require_same_grid(g);
  simd::axpy(1.0, g.values_, values_);
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& g) {
  require_same_grid(g);
  simd::axpy(-1.0, g.values_, values_);
  return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
  for (Complex& v : values_) v *= c;
  return *this;
}

void GridFunction::require_same_grid(const GridFunction& g) const {
  if (!(g.grid_ == grid_)) throw DimensionError("grid functions live on different grids");
}

void require_contained(const GridFunction& f, double limit, const char* what) {
  const double t = f.tail_fraction();
  if (t > limit) {
    std::ostringstream os;
    os << what << ": " << t << " of the squared norm sits at the grid edge (limit " << limit
       << "); enlarge x_max";
    throw GridOverflow(os.str());
  }
}

GridFunction shift(const GridFunction& f, double a) {
  const GridSpec& g = f.grid();
  const double s = a / g.dx();
  const double r = std::round(s);
  GridFunction out(g);
  if (std::abs(s - r) <= 1e-9) {
    const auto k = static_cast<long long>(r);
    const auto N = static_cast<long long>(g.N);
    for (long long j = 0; j < N; ++j) {
      const long long src = j - k;
      if (src >= 0 && src < N) out[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(src)];
    }
    return out;
  }
  std::vector<Complex> v = f.values();
  detail::fft(v, false);
  const double inv = 1.0 / static_cast<double>(g.N);
  for (std::size_t k = 0; k < g.N; ++k)
    v[k] *= std::polar(inv, -detail::fft_frequency(k, g.N, g.dx()) * a);
  detail::fft(v, true);
  out.values() = std::move(v);
  return out;
}

GridFunction spectral_derivative(const GridFunction& f) {
  const GridSpec& g = f.grid();
  std::vector<Complex> v = f.values();
  detail::fft(v, false);
  const double inv = 1.0 / static_cast<double>(g.N);
  for (std::size_t k = 0; k < g.N; ++k) v[k] *= Complex(0.0, detail::fft_frequency(k, g.N, g.dx()) * inv);
  detail::fft(v, true);
  return GridFunction(g, std::move(v));
}

PhasePoint expectation(const GridFunction& f) {
  const double n2 = simd::norm2(f.values());
  if (n2 == 0.0) throw NumericalFailure("expectation of the zero function");
  double sx = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sx += f.x(j) * std::norm(f[j]);
  const GridFunction df = spectral_derivative(f);
  // ⟨p⟩ = Σ conj(f) (−i f') / Σ|f|²
  const Complex sp = Complex(0.0, -1.0) * simd::dotc(f.values(), df.values());
  return {sx / n2, sp.real() / n2};
}

GridFunction hw_apply(PhasePoint z0, const GridFunction& f) {
  if (std::abs(z0.x) > 0.5 * f.grid().x_max) {
    std::ostringstream os;
    os << "translation by x0 = " << z0.x << " exceeds x_max/2 = " << 0.5 * f.grid().x_max;
    throw GridOverflow(os.str());
  }
  // mass within |x0| of the edge it moves toward leaves the window (or wraps)
  if (z0.x != 0.0) {
    const auto strip = std::min(f.size(), static_cast<std::size_t>(std::ceil(std::abs(z0.x) / f.grid().dx())) + 1);
    std::span<const Complex> all(f.values());
    const double total = simd::norm2(all);
    const double leaving = simd::norm2(z0.x > 0.0 ? all.last(strip) : all.first(strip));
    if (total > 0.0 && leaving > tol::grid_tail * total) {
      std::ostringstream os;
      os << "translation by x0 = " << z0.x << " moves " << leaving / total << " of the squared norm off the grid";
      throw GridOverflow(os.str());
    }
  }
  GridFunction out = z0.x == 0.0 ? f : shift(f, z0.x);
  if (z0.p != 0.0) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, z0.p * out.x(j) - 0.5 * z0.p * z0.x);
  }
  return out;
}

HwResiduals hw_commutation_check(PhasePoint z0, PhasePoint z1, const GridFunction& f) {
  const double nf = f.norm();
  const double s = sigma(z0, z1);
  const GridFunction t01 = hw_apply(z0, hw_apply(z1, f));
  const GridFunction t10 = hw_apply(z1, hw_apply(z0, f));
  const GridFunction tsum = hw_apply({z0.x + z1.x, z0.p + z1.p}, f);
  return {t01.distance(std::polar(1.0, s) * t10) / nf, tsum.distance(std::polar(1.0, -0.5 * s) * t01) / nf};
}

namespace {

// Normalised recurrence h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1},
// run on rescaled values with the common factor kept as a logarithm.
template <class Sink>
void hermite_recurrence(std::size_t count, double x, Sink&& sink) {
  double log_scale = -0.5 * x * x - 0.25 * std::log(kPi);
  double prev = 0.0, cur = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    sink(k, cur * std::exp(log_scale));
    const double kk = static_cast<double>(k);
    const double next = std::sqrt(2.0 / (kk + 1.0)) * x * cur - std::sqrt(kk / (kk + 1.0)) * prev;
    prev = cur;
    cur = next;
    const double a = std::abs(cur);
    if (a > 1e100) {
      const double l = std::log(a);
      prev /= a;
      cur /= a;
      log_scale += l;
    }
  }
}

}  // namespace

std::vector<GridFunction> hermite_functions(const GridSpec& grid, std::size_t count) {
  std::vector<GridFunction> h(count, GridFunction(grid));
  for (std::size_t j = 0; j < grid.N; ++j)
    hermite_recurrence(count, grid.x(j), [&](std::size_t k, double v) { h[k][j] = v; });
  return h;
}

double hermite_function(std::size_t k, double x) {
  double out = 0.0;
  hermite_recurrence(k + 1, x, [&](std::size_t i, double v) {
    if (i == k) out = v;
  });
  return out;
}

}  // namespace metasymp
