#include <doctest.h>

#include <cmath>

#include "metasymp/errors.hpp"
#include "metasymp/tolerances.hpp"
#include "metasymp/twisted.hpp"

using namespace metasymp;

namespace {

constexpr std::size_t kCount = 64;
constexpr double kH = 0.25;

PhaseGaussian symbol(Complex a11, Complex a12, Complex a22, Complex b1, Complex b2) {
  PhaseGaussian s;
  s.A = CMat(2, 2);
  s.A << a11, a12, a12, a22;
  s.b = CVec(2);
  s.b << b1, b2;
  s.c = 0.0;
  return s;
}

PhaseSpaceGrid sampled(const PhaseGaussian& s) {
  return sample_symbol(kCount, kH, [&](double x, double p) { return s(x, p); });
}

// 2π δ(z) on the grid: the twisted symbol of the identity
PhaseSpaceGrid identity_symbol() {
  PhaseSpaceGrid d(kCount, kH);
  d.at(kCount / 2, kCount / 2) = 2.0 * kPi / (kH * kH);
  return d;
}

double peak(const PhaseSpaceGrid& g) {
  double m = 0.0;
  for (const Complex& v : g.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("twisted") {

TEST_CASE("phase-space grid") {
  const PhaseSpaceGrid g(kCount, kH);
  CHECK(g.coord(kCount / 2) == 0.0);
  CHECK(g.coord(0) == doctest::Approx(-8.0));
  const PhaseGaussian s = symbol(1.0, 0.0, 1.0, 0.0, 0.0);
  CHECK(std::abs(s(0.5, -0.5) - Complex(std::exp(-0.25))) < 1e-15);
  CHECK(sampled(s).tail_fraction() < 1e-12);
}

TEST_CASE("convolution with the delta symbol") {
  const PhaseSpaceGrid b = sampled(symbol({1.1, 0.1}, 0.2, {0.9, -0.1}, {0.3, 0.2}, {-0.1, 0.4}));
  PhaseSpaceGrid delta(kCount, kH);
  delta.at(kCount / 2, kCount / 2) = 1.0 / (kH * kH);
  CHECK(twisted_convolution(delta, b).max_abs_difference(b) < 1e-14);
  CHECK(twisted_convolution(b, delta).max_abs_difference(b) < 1e-14);
}

TEST_CASE("numeric convolution against the closed form") {
  const PhaseGaussian a = symbol({1.2, 0.1}, {0.2, -0.1}, {0.9, 0.05}, {0.3, -0.2}, {0.1, 0.4});
  const PhaseGaussian b = symbol({0.85, -0.15}, {-0.25, 0.1}, {1.3, 0.0}, {-0.4, 0.1}, {0.2, -0.3});
  const PhaseSpaceGrid numeric = twisted_convolution(sampled(a), sampled(b));
  const PhaseSpaceGrid closed = sampled(twisted_convolution_gaussian(a, b));
  CHECK(numeric.max_abs_difference(closed) / peak(closed) < tol::twisted);
  // the twist makes the product non-commutative
  const PhaseSpaceGrid swapped = sampled(twisted_convolution_gaussian(b, a));
  CHECK(swapped.max_abs_difference(closed) / peak(closed) > 1e-2);
}

TEST_CASE("twisted symbols compose like their operators") {
  const GridSpec grid{8.0, 256};
  const GridFunction f = GaussianState::standard(0.4, -0.3).sample(grid);
  CHECK(weyl_apply(identity_symbol(), f).distance(f) < 1e-14);

  const PhaseGaussian a = symbol({1.0, 0.1}, 0.15, {1.2, -0.1}, {0.2, 0.1}, {-0.3, 0.0});
  const PhaseGaussian b = symbol({1.4, 0.0}, {-0.1, 0.05}, {0.8, 0.2}, {0.0, -0.2}, {0.4, 0.1});
  const PhaseSpaceGrid ag = sampled(a), bg = sampled(b);
  PhaseSpaceGrid c = twisted_convolution(ag, bg);
  for (std::size_t i = 0; i < kCount; ++i)
    for (std::size_t j = 0; j < kCount; ++j) c.at(i, j) /= 2.0 * kPi;
  const GridFunction lhs = weyl_apply(ag, weyl_apply(bg, f));
  CHECK(lhs.distance(weyl_apply(c, f)) / lhs.norm() < tol::twisted);
}

TEST_CASE("inputs that reach the rim are refused") {
  const PhaseSpaceGrid wide = sampled(symbol(0.01, 0.0, 0.01, 0.0, 0.0));
  CHECK_THROWS_AS(twisted_convolution(wide, wide), GridOverflow);
  CHECK_THROWS_AS(twisted_convolution_gaussian(symbol(-1.0, 0.0, 1.0, 0.0, 0.0), symbol(-1.0, 0.0, 1.0, 0.0, 0.0)),
                  NumericalFailure);
  // h must be a multiple of dx (here dx = 3/64)
  CHECK_THROWS_AS(weyl_apply(identity_symbol(), GaussianState::standard().sample(GridSpec{6.0, 256})), DimensionError);
}

}  // TEST_SUITE
