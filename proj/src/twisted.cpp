#include "metasymp/twisted.hpp"

#include <cmath>

#include "metasymp/errors.hpp"
#include "metasymp/simd/kernels.hpp"
#include "metasymp/tolerances.hpp"

namespace metasymp {

PhaseSpaceGrid::PhaseSpaceGrid(std::size_t count, double h) : count_(count), h_(h), values_(count * count) {
  if (count < 16 || count % 2 != 0) throw DimensionError("phase-space grid needs an even count >= 16");
  if (!(h > 0.0)) throw DimensionError("phase-space grid spacing must be positive");
}

double PhaseSpaceGrid::tail_fraction() const {
  const double total = simd::norm2(values_);
  if (total == 0.0) return 0.0;
  const std::size_t rim = count_ / 16;
  double s = 0.0;
  for (std::size_t i = 0; i < count_; ++i)
    for (std::size_t j = 0; j < count_; ++j) {
      const bool edge = i < rim || j < rim || i >= count_ - rim || j >= count_ - rim;
      if (edge) s += std::norm(at(i, j));
    }
  return s / total;
}

double PhaseSpaceGrid::max_abs_difference(const PhaseSpaceGrid& o) const {
  if (o.count_ != count_ || o.h_ != h_) throw DimensionError("phase-space grids differ");
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) m = std::max(m, std::abs(values_[k] - o.values_[k]));
  return m;
}

PhaseSpaceGrid sample_symbol(std::size_t count, double h, const std::function<Complex(double, double)>& a) {
  PhaseSpaceGrid g(count, h);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) g.at(i, j) = a(g.coord(i), g.coord(j));
  return g;
}

Complex PhaseGaussian::operator()(double x, double p) const {
  CVec v(2);
  v << x, p;
  return std::exp(-0.5 * (v.transpose() * A * v)(0, 0) + (b.transpose() * v)(0, 0) + c);
}

PhaseSpaceGrid twisted_convolution(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  if (a.count() != b.count() || a.h() != b.h()) throw DimensionError("twisted convolution: grids differ");
  for (const PhaseSpaceGrid* g : {&a, &b})
    if (g->tail_fraction() > tol::twisted_tail)
      throw GridOverflow("twisted convolution: symbol not contained in the phase-space window");

  const std::size_t n = a.count();
  const auto half = static_cast<long long>(n / 2);
  const double h2 = a.h() * a.h();

  // Rows of a reversed so that a(r, j − l + n/2) is contiguous and increasing in l.
  std::vector<Complex> rev(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t m = 0; m < n; ++m) rev[r * n + m] = a.at(r, n - 1 - m);

  PhaseSpaceGrid c(n, a.h());
  std::vector<Complex> weighted(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xz = a.coord(i);
    // weighted(k, l) = e^{−(i/2) x_z p_u} b(k, l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) weighted[k * n + l] = std::polar(1.0, -0.5 * xz * b.coord(l)) * b.at(k, l);
    for (std::size_t j = 0; j < n; ++j) {
      const double pz = a.coord(j);
      const long long off = static_cast<long long>(n) - 1 - static_cast<long long>(j) - half;
      const long long l_lo = std::max(0LL, -off);
      const long long l_hi = std::min(static_cast<long long>(n), static_cast<long long>(n) - off);
      if (l_lo >= l_hi) continue;
      const auto len = static_cast<std::size_t>(l_hi - l_lo);
      Complex sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const long long r = static_cast<long long>(i) - static_cast<long long>(k) + half;
        if (r < 0 || r >= static_cast<long long>(n)) continue;
        const Complex inner = simd::dotu(
            std::span<const Complex>(&weighted[k * n + static_cast<std::size_t>(l_lo)], len),
            std::span<const Complex>(&rev[static_cast<std::size_t>(r) * n + static_cast<std::size_t>(l_lo + off)], len));
        sum += std::polar(1.0, 0.5 * pz * b.coord(k)) * inner;
      }
      c.at(i, j) = h2 * sum;
    }
  }
  return c;
}

PhaseGaussian twisted_convolution_gaussian(const PhaseGaussian& a, const PhaseGaussian& b) {
  // variables (z_x, z_p, u_x, u_p)
  Mat Ta(2, 4), Tb(2, 4);
  Ta << 1, 0, -1, 0, 0, 1, 0, -1;
  Tb << 0, 0, 1, 0, 0, 0, 0, 1;
  QuadraticExponent e = QuadraticExponent(a.A, a.b, a.c).substitute(Ta) + QuadraticExponent(b.A, b.b, b.c).substitute(Tb);
  auto unit = [](int k) {
    Vec v = Vec::Zero(4);
    v(k) = 1.0;
    return v;
  };
  // (i/2)σ(z, u) = (i/2)(p_z x_u − x_z p_u)
  e.add_bilinear(Complex(0.0, 0.5), unit(1), unit(2));
  e.add_bilinear(Complex(0.0, -0.5), unit(0), unit(3));
  const QuadraticExponent r = e.integrate_trailing(2);
  return {r.A(), r.b(), r.c()};
}

GridFunction weyl_apply(const PhaseSpaceGrid& a, const GridFunction& f) {
  const GridSpec& g = f.grid();
  const double ratio = a.h() / g.dx();
  const double step = std::round(ratio);
  if (std::abs(ratio - step) > 1e-9 || step < 1.0)
    throw DimensionError("weyl_apply: phase-space spacing must be a multiple of the grid spacing");
  const auto s = static_cast<long long>(step);
  const std::size_t n = a.count();
  const auto N = static_cast<long long>(g.N);
  const double scale = a.h() * a.h() / (2.0 * kPi);

  GridFunction out(g);
  std::vector<Complex> phase(g.N);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = a.coord(i);
    const long long shift = (static_cast<long long>(i) - static_cast<long long>(n / 2)) * s;
    // Σ_j a(i, j) e^{i p_j (x − x_i/2)} at every grid point
    for (long long q = 0; q < N; ++q) {
      const long long src = q - shift;
      if (src < 0 || src >= N) continue;
      const double xq = g.x(static_cast<std::size_t>(q));
      Complex acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += a.at(i, j) * std::polar(1.0, a.coord(j) * (xq - 0.5 * xi));
      out[static_cast<std::size_t>(q)] += scale * acc * f[static_cast<std::size_t>(src)];
    }
  }
  return out;
}

}  // namespace metasymp
