#include <doctest.h>

#include <cmath>

#include "metasymp/errors.hpp"
#include "metasymp/gaussian.hpp"
#include "metasymp/grid.hpp"
#include "metasymp/tolerances.hpp"

using namespace metasymp;

namespace {

GridFunction standard(const GridSpec& g, double x0 = 0.0, double p0 = 0.0) {
  return GaussianState::standard(x0, p0).sample(g);
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid spec") {
  const GridSpec g{8.0, 256};
  CHECK(g.dx() == doctest::Approx(1.0 / 16));
  CHECK(g.x(0) == -8.0);
  CHECK(g.x(128) == doctest::Approx(0.0));
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS((GridSpec{8.0, 100}.validate()), DimensionError);
  CHECK_THROWS_AS((GridSpec{-1.0, 256}.validate()), DimensionError);
  const GridSpec b = basis_grid(128);
  CHECK(b.x_max >= std::sqrt(256.0) + 5.0);
  CHECK(b.dx() <= 0.0211);
}

TEST_CASE("norms and inner products") {
  const GridSpec g{12.0, 1024};
  const GridFunction f = standard(g);
  CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(f.inner(f) - Complex(1.0)) < 1e-12);
  CHECK(f.tail_fraction() < 1e-12);
  CHECK(f.distance(f) == 0.0);
  const GridFunction h = standard(g, 0.0, 1.0);
  // ⟨g₀, g_p⟩ = e^{−p²/4}
  CHECK(std::abs(f.inner(h) - Complex(std::exp(-0.25))) < 1e-12);
  CHECK_THROWS_AS(f.inner(standard(GridSpec{10.0, 1024})), DimensionError);
}

TEST_CASE("shift on and off the grid") {
  const GridSpec g{12.0, 1024};
  const GridFunction f = standard(g);
  const double aligned = 40 * g.dx();
  CHECK(shift(f, aligned).distance(standard(g, aligned)) < 1e-14);
  CHECK(shift(f, 0.3).distance(standard(g, 0.3)) < 1e-12);
  CHECK(shift(shift(f, 0.3), -0.3).distance(f) < 1e-12);
}

TEST_CASE("spectral derivative and phase-space centre") {
  const GridSpec g{12.0, 1024};
  const GridFunction f = standard(g, 0.7, -1.2);
  const GridFunction df = spectral_derivative(f);
  double err = 0.0;
  for (std::size_t j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    err = std::max(err, std::abs(df[j] - (Complex(-(x - 0.7), -1.2)) * f[j]));
  }
  CHECK(err < 1e-10);
  const PhasePoint c = expectation(f);
  CHECK(c.x == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(c.p == doctest::Approx(-1.2).epsilon(1e-10));
}

TEST_CASE("Heisenberg-Weyl operators") {
  const GridSpec g{12.0, 1024};
  const GridFunction f = standard(g);
  const PhasePoint z0{40 * g.dx(), 0.5};
  const GridFunction Tf = hw_apply(z0, f);
  CHECK(Tf.norm() == doctest::Approx(1.0).epsilon(1e-12));
  // g_{z₀} carries e^{ip₀(x − x₀)}, so T(z₀)g₀ = e^{ip₀x₀/2} g_{z₀}
  const GridFunction coherent = std::exp(Complex(0, 0.5 * z0.p * z0.x)) * standard(g, z0.x, z0.p);
  CHECK(Tf.distance(coherent) < 1e-12);
  const PhasePoint c = expectation(Tf);
  CHECK(c.x == doctest::Approx(z0.x).epsilon(1e-10));
  CHECK(c.p == doctest::Approx(z0.p).epsilon(1e-10));
}

TEST_CASE("Heisenberg-Weyl commutation and composition") {
  const GridSpec g{12.0, 1024};
  const GridFunction f = standard(g);
  CHECK(sigma({1, 0}, {0, 1}) == -1.0);
  CHECK(sigma({0, 1}, {1, 0}) == 1.0);
  const HwResiduals r = hw_commutation_check({1, 0}, {0, 1}, f);
  CHECK(r.commutation < tol::heisenberg);
  CHECK(r.composition < tol::heisenberg);
  const HwResiduals s = hw_commutation_check({-1.5, 0.4}, {0.75, -2.0}, standard(g, 0.2, 0.1));
  CHECK(s.commutation < tol::heisenberg);
  CHECK(s.composition < tol::heisenberg);
}

TEST_CASE("Heisenberg-Weyl refuses shifts off the grid") {
  const GridSpec g{12.0, 1024};
  CHECK_THROWS_AS(hw_apply({7.0, 0.0}, standard(g)), GridOverflow);
  // within x_max/2, but the state already sits near the right edge
  CHECK_THROWS_AS(hw_apply({5.0, 0.0}, standard(g, 6.0)), GridOverflow);
  CHECK_NOTHROW(hw_apply({-5.0, 0.0}, standard(g, 6.0)));
}

TEST_CASE("Hermite functions") {
  const GridSpec g = basis_grid(64);
  const auto h = hermite_functions(g, 64);
  REQUIRE(h.size() == 64);
  double worst = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j)
    for (std::size_t k = 0; k <= j; ++k)
      worst = std::max(worst, std::abs(h[j].inner(h[k]) - Complex(j == k ? 1.0 : 0.0)));
  CHECK(worst < 1e-12);
  CHECK(hermite_function(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)));
  CHECK(hermite_function(1, 1.0) == doctest::Approx(std::sqrt(2.0) * std::pow(kPi, -0.25) * std::exp(-0.5)));
  // parity h_k(−x) = (−1)^k h_k(x)
  CHECK(hermite_function(7, -1.3) == doctest::Approx(-hermite_function(7, 1.3)));
  // the recurrence stays finite far into the tail
  CHECK(std::isfinite(hermite_function(200, 30.0)));
}

TEST_CASE("containment check") {
  const GridSpec g{12.0, 1024};
  CHECK_NOTHROW(require_contained(standard(g), tol::grid_tail, "f"));
  CHECK_THROWS_AS(require_contained(standard(g, 11.0), tol::grid_tail, "f"), GridOverflow);
}

}  // TEST_SUITE

TEST_SUITE("gaussian") {

TEST_CASE("standard state") {
  const GaussianState g = GaussianState::standard();
  CHECK(g.norm() == doctest::Approx(1.0));
  CHECK(std::abs(g(0.0) - Complex(std::pow(kPi, -0.25))) < 1e-15);
  const GridFunction s = g.sample(GridSpec{12.0, 1024});
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_distance(g, g) == 0.0);
  CHECK(l2_distance(g, g.scaled(Complex(0, 1))) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("closed-form norm matches quadrature") {
  GaussianState g;
  g.x0 = 0.4;
  g.p0 = -0.8;
  g.width = Complex(0.7, 0.3);
  g.log_amplitude = Complex(0.2, 1.1);
  CHECK(g.sample(GridSpec{16.0, 2048}).norm() == doctest::Approx(g.norm()).epsilon(1e-12));
}

TEST_CASE("integrating out a variable") {
  // ∫ e^{−x²/2} dx = √(2π)
  QuadraticExponent e(1);
  e.add_quadratic(CMat::Identity(1, 1));
  const QuadraticExponent r = e.integrate_out(0);
  CHECK(r.vars() == 0);
  CHECK(std::abs(std::exp(r.c()) - Complex(std::sqrt(2 * kPi))) < 1e-14);

  // Fresnel limit: ∫ e^{ix²/2} dx = √(2π) e^{iπ/4}
  QuadraticExponent f(1);
  f.add_quadratic(CMat::Constant(1, 1, Complex(0, -1)));
  CHECK(std::abs(std::exp(f.integrate_out(0).c()) - std::sqrt(2 * kPi) * std::polar(1.0, kPi / 4)) < 1e-14);

  QuadraticExponent bad(1);
  bad.add_quadratic(CMat::Constant(1, 1, Complex(-1, 0)));
  CHECK_THROWS_AS(bad.integrate_out(0), NumericalFailure);
}

TEST_CASE("two-variable integral against a product of one-dimensional ones") {
  // exp(−½(2x² + 2xy + 3y²) + x − y): Gaussian integral (2π/√det A) e^{½bᵀA⁻¹b}
  CMat A(2, 2);
  A << 2, 1, 1, 3;
  CVec b(2);
  b << 1, -1;
  const QuadraticExponent e(A, b, 0.0);
  const QuadraticExponent r = e.integrate_trailing(0);
  const Complex expected = 2 * kPi / std::sqrt(5.0) * std::exp(0.5 * (b.transpose() * A.inverse() * b)(0));
  CHECK(std::abs(std::exp(r.c()) - expected) < 1e-12 * std::abs(expected));
  // integrating y alone leaves a one-variable exponent in x
  const QuadraticExponent rx = e.integrate_out(1);
  REQUIRE(rx.vars() == 1);
  const Complex again = std::exp(rx.integrate_out(0).c());
  CHECK(std::abs(again - expected) < 1e-12 * std::abs(expected));
}

TEST_CASE("substitution and translation") {
  const GaussianState g = GaussianState::standard(0.3, 0.6);
  const QuadraticExponent e = g.exponent();
  CHECK(std::abs(e.value(Vec::Constant(1, 0.9)) - g(0.9)) < 1e-14);
  const GaussianState back = GaussianState::from_exponent(e);
  CHECK(l2_distance(back, g) < 1e-14);

  // T̂(1, 0.5) applied through the exponent calculus
  QuadraticExponent two = e.substitute(Mat::Identity(1, 2));  // variables (x, v)
  Vec Wx(2), Wp(2);
  Wx << 0, 1;
  Wp << 0, 0.5;
  const QuadraticExponent moved = apply_translation(two, Wx, Wp);
  Vec at(2);
  at << 1.7, 1.0;  // v = 1
  const Complex direct = std::exp(Complex(0, 0.5 * 1.7 - 0.25)) * g(0.7);
  CHECK(std::abs(moved.value(at) - direct) < 1e-14);
}

}  // TEST_SUITE
