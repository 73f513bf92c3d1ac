#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "metasymp/basis.hpp"
#include "metasymp/errors.hpp"
#include "metasymp/fresnel.hpp"
#include "metasymp/index.hpp"
#include "metasymp/weyl.hpp"

using namespace metasymp;
using testing::gen1;
using testing::rows;
using testing::scalar;

namespace {

const GridSpec kGrid{12.0, 512};

Complex phase(double angle) { return std::polar(1.0, angle); }

MWDescriptor minus_identity(int nu) { return MWDescriptor(SymplecticMatrix(Mat(-Mat::Identity(2, 2))), nu); }

GridFunction reflected(const GridFunction& f) {
  GridFunction r(f.grid());
  // x_j = −x_max + j·dx, so −x_j = x_{N−j}; x_0 = −x_max has no partner and is left 0
  for (std::size_t j = 1; j < f.size(); ++j) r[j] = f[f.size() - j];
  return r;
}

GaussianState squeezed(double x0, double p0) {
  GaussianState g = GaussianState::standard(x0, p0);
  g.width = Complex(1.4, 0.3);
  return g.scaled(1.0 / g.norm());
}

}  // namespace

TEST_SUITE("weyl") {

TEST_CASE("Fresnel integral, closed form") {
  const Vec zero1 = Vec::Zero(1);
  CHECK(std::abs(fresnel_closed(scalar(1), zero1) - phase(kPi / 4)) < 1e-15);
  CHECK(std::abs(fresnel_closed(scalar(-1), zero1) - phase(-kPi / 4)) < 1e-15);
  CHECK(std::abs(fresnel_closed(rows({{1, 0}, {0, -1}}), Vec::Zero(2)) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(fresnel_closed(scalar(1), Vec::Ones(1)) - phase(kPi / 4 - 0.5)) < 1e-15);
  CHECK(std::abs(fresnel_closed(scalar(2), zero1) - phase(kPi / 4) / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(fresnel_closed(scalar(0), zero1), FresnelDegenerate);
  CHECK_THROWS_AS(fresnel_closed(rows({{1, 1}, {0, 1}}), Vec::Zero(2)), SymmetryError);
}

TEST_CASE("Fresnel integral, damped quadrature") {
  Vec v(2);
  v << 0.7, -1.3;
  const Mat M = rows({{1.5, 0.4}, {0.4, -0.8}});
  const FresnelNumeric r = fresnel_numeric(M, v);
  CHECK(std::abs(r.value - fresnel_closed(M, v)) < tol::fresnel);
  CHECK(r.samples.size() == 4);
  CHECK(std::abs(fresnel_numeric(scalar(-2.5), Vec::Constant(1, 2.0)).value -
                 fresnel_closed(scalar(-2.5), Vec::Constant(1, 2.0))) < tol::fresnel);
}

TEST_CASE("quadratic Fourier transform of the standard generator") {
  // W_J = −xx', m = 0: Ŝ = e^{−iπ/4} × (unitary Fourier transform)
  const FreeGenerator WJ = gen1(0, 1, 0, 0);
  const GridFunction g0 = GaussianState::standard().sample(kGrid);
  const GridFunction Sg = quad_fourier_apply(WJ, g0);
  CHECK(Sg.distance(phase(-kPi / 4) * g0) < 1e-10);

  // twice: e^{−iπ/2} times the reflection f(x) ↦ f(−x)
  const GridFunction f = GaussianState::standard(1.0, 0.5).sample(kGrid);
  const GridFunction SSf = quad_fourier_apply(WJ, quad_fourier_apply(WJ, f));
  CHECK(SSf.distance(Complex(0, -1) * reflected(f)) < 1e-9);

  // the inverse generator undoes it
  const GridFunction back = quad_fourier_apply(generator_inverse(WJ), quad_fourier_apply(WJ, f));
  CHECK(back.distance(f) < 1e-6);

  // m + 2 flips the sign
  CHECK(quad_fourier_apply(WJ.with_m(2), f).distance(-1.0 * quad_fourier_apply(WJ, f)) < 1e-12);
}

TEST_CASE("quadratic Fourier transform, grid against closed form") {
  const FreeGenerator W = gen1(0.4, 1.3, -0.2, 0);
  const GaussianState g = squeezed(0.5, -0.3);
  const GridFunction grid = quad_fourier_apply(W, g.sample(kGrid));
  CHECK(grid.distance(quad_fourier_gaussian(W, g).sample(kGrid)) < 1e-8);
  CHECK_THROWS_AS(quad_fourier_apply(gen1(0, 40, 0, 0), g.sample(kGrid)), NumericalFailure);
}

TEST_CASE("Hermite functions are eigenfunctions of the Fourier generator") {
  const FreeGenerator WJ = gen1(0, 1, 0, 0);
  const auto h = hermite_functions(kGrid, 4);
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Complex expected = phase(-kPi / 4) * std::pow(Complex(0, -1), static_cast<int>(k));
    CHECK(quad_fourier_apply(WJ, h[k]).distance(expected * h[k]) < 1e-9);
  }
}

TEST_CASE("Mehlig-Wilkinson operator of -I") {
  // R̂_ν(−I) f(x) = i^ν f(−x)
  const GridFunction f = GaussianState::standard(1.2, -0.7).sample(kGrid);
  for (int nu : {1, 3}) {
    const GridFunction r = mw_apply_grid(minus_identity(nu), f);
    CHECK(r.distance(IndexMod4(nu).i_power() * reflected(f)) < 1e-9);
  }
  CHECK_THROWS_AS(MWDescriptor(SymplecticMatrix::identity(1), 0), FixedPointError);
}

TEST_CASE("Mehlig-Wilkinson operator of J matches the quadratic Fourier transform") {
  // ν(W_J, m = 0) = 3
  const MWDescriptor D(standard_J(1), 3);
  const GaussianState g = squeezed(0.8, 0.4);
  const GridFunction a = mw_apply_grid(D, g.sample(kGrid));
  const GridFunction b = quad_fourier_apply(gen1(0, 1, 0, 0), g.sample(kGrid));
  CHECK(a.distance(b) < 1e-8);
  CHECK(a.distance(mw_apply_gaussian(D, g).sample(kGrid)) < 1e-8);
  // ν + 2 is the other sheet
  CHECK(mw_apply_grid(MWDescriptor(standard_J(1), 1), g.sample(kGrid)).distance(-1.0 * a) < 1e-12);
}

TEST_CASE("Mehlig-Wilkinson operator moves phase-space centres by S") {
  const MWDescriptor D(standard_J(1), 3);
  const PhasePoint c = expectation(mw_apply_grid(D, GaussianState::standard(1.0, 0.0).sample(kGrid)));
  CHECK(c.x == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(c.p == doctest::Approx(-1.0).epsilon(1e-9));

  const SymplecticMatrix S = rotation(1.1);
  const MWDescriptor R(S, 3);
  const PhasePoint z{0.6, -0.9};
  const PhasePoint moved = expectation(mw_apply_grid(R, GaussianState::standard(z.x, z.p).sample(kGrid)));
  const Vec Sz = S.matrix() * (Vec(2) << z.x, z.p).finished();
  CHECK(moved.x == doctest::Approx(Sz(0)).epsilon(1e-8));
  CHECK(moved.p == doctest::Approx(Sz(1)).epsilon(1e-8));
}

TEST_CASE("Mehlig-Wilkinson operator, grid against closed form") {
  const SymplecticMatrix S(rows({{1.2, 0.5}, {-0.4, 2.0 / 3.0}}));
  REQUIRE(is_symplectic(S.matrix()));
  const int nu = check_arg_det_relation(S, 0) ? 0 : 1;
  const MWDescriptor D(S, nu);
  const GaussianState g = squeezed(-0.4, 0.9);
  CHECK(mw_apply_grid(D, g.sample(kGrid)).distance(mw_apply_gaussian(D, g).sample(kGrid)) < 1e-8);
}

TEST_CASE("kernel strategies agree") {
  const MWDescriptor D(rotation(2.0), 3);
  const GridFunction f = squeezed(0.3, 0.2).sample(kGrid);
  const GridFunction a = mw_apply_grid(D, f, {MwStrategy::fresnel, {}});
  CHECK(mw_apply_grid(D, f, {MwStrategy::automatic, {}}).distance(a) == 0.0);
  // extrapolating from ε ≥ 2.5e-3 leaves an O(ε³) remainder near 1e-5
  CHECK(mw_apply_grid(D, f, {MwStrategy::damped, {1e-2, 5e-3, 2.5e-3}}).distance(a) < 1e-4);

  // M₂₂ = 0 requires the delta route: S = −I has M = 0
  CHECK_THROWS_AS(mw_apply_grid(minus_identity(1), f, {MwStrategy::fresnel, {}}), NumericalFailure);
  const GridFunction d = mw_apply_grid(minus_identity(1), f, {MwStrategy::delta, {}});
  CHECK(d.distance(Complex(0, 1) * reflected(f)) < 1e-9);
}

TEST_CASE("Mehlig-Wilkinson operator is linear and unitary") {
  const MWDescriptor D(rotation(0.9), 3);
  const GridFunction f = squeezed(0.5, 0.1).sample(kGrid), g = squeezed(-1.0, 0.7).sample(kGrid);
  const Complex a(0.3, -1.1), b(-0.8, 0.25);
  const GridFunction lhs = mw_apply_grid(D, a * f + b * g);
  const GridFunction rhs = a * mw_apply_grid(D, f) + b * mw_apply_grid(D, g);
  CHECK(lhs.distance(rhs) < 1e-10);
  CHECK(mw_apply_grid(D, f).norm() == doctest::Approx(f.norm()).epsilon(1e-8));
}

TEST_CASE("equivalent integral forms") {
  for (const SymplecticMatrix& S : {standard_J(1), SymplecticMatrix(Mat(-Mat::Identity(2, 2))), rotation(2.4)}) {
    const int nu = check_arg_det_relation(S, 1) ? 1 : 0;
    const MWDescriptor D(S, nu);
    const AltFormsResidual r = alt_forms_residual(D, squeezed(0.3, -0.6));
    CHECK(r.sigma_form < tol::alt_forms);
    CHECK(r.product_form < tol::alt_forms);
  }
}

TEST_CASE("metaplectic covariance") {
  const GridSpec grid{12.0, 1024};
  const GridFunction f = GaussianState::standard().sample(grid);
  const FreeGenerator WJ = gen1(0, 1, 0, 0);
  const Applier qft = quad_fourier_kernel(WJ, grid).applier(1e-12);
  const PhasePoint z{16 * grid.dx(), -0.7};
  CHECK(covariance_residual(qft, standard_J(1), z, f) < tol::covariance);
  // a global phase does not change the residual
  const Applier rotated = [&](const GridFunction& g) { return phase(0.83) * qft(g); };
  CHECK(covariance_residual(rotated, standard_J(1), z, f) ==
        doctest::Approx(covariance_residual(qft, standard_J(1), z, f)).epsilon(1e-6));
  // the wrong matrix is detected
  CHECK(covariance_residual(qft, rotation(1.0), z, f) > 1e-2);

  const MWDescriptor D(rotation(1.3), 3);
  const Applier mw = mw_kernel(D, grid).applier(1e-12);
  CHECK(covariance_residual(mw, D.S(), z, f) < tol::covariance);
}

TEST_CASE("operator in the oscillator basis") {
  const GridSpec grid = basis_grid(16);
  const OperatorMatrix id = operator_in_basis([](const GridFunction& f) { return f; }, 16, grid);
  CHECK(max_abs((id.entries - CMat::Identity(16, 16)).cwiseAbs()) < 1e-12);
  CHECK(id.unitarity_defect_quarter() < 1e-12);

  const OperatorMatrix par = operator_in_basis(reflected, 16, grid);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(par.entries(k, k) - Complex(k % 2 ? -1.0 : 1.0)) < 1e-10);

  // ⟨h₀, T(0, p₀) h₀⟩ = e^{−p₀²/4}
  const double p0 = 0.8;
  const OperatorMatrix T = operator_in_basis([&](const GridFunction& f) { return hw_apply({0.0, p0}, f); }, 16, grid);
  CHECK(std::abs(T.entries(0, 0) - Complex(std::exp(-p0 * p0 / 4))) < 1e-12);
  CHECK(T.unitarity_defect_quarter() < 1e-6);

  CHECK(id.quarter_residual(id) == 0.0);
  CHECK(id.quarter_residual(id, Complex(0, 1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(operator_in_basis(reflected, 128, GridSpec{8.0, 512}), GridOverflow);
}

TEST_CASE("trace of the Mehlig-Wilkinson operator") {
  // −I: i^ν / 2
  const TraceResult pi = trace_mw(minus_identity(1), 64);
  CHECK(std::abs(pi.expected - Complex(0, 0.5)) < 1e-15);
  CHECK(pi.error < tol::trace_at_pi);
  CHECK(pi.elliptic);  // −I is the rotation by π

  // J: i³ / √2
  const TraceResult j = trace_mw(MWDescriptor(standard_J(1), 3), 128);
  CHECK(std::abs(j.expected - Complex(0, -1) / std::sqrt(2.0)) < 1e-15);
  CHECK(j.elliptic);
  CHECK(j.error < tol::trace_abs);

  // a larger basis does no worse
  const MWDescriptor D(rotation(2.2), 3);
  const double e32 = trace_mw(D, 32).error, e128 = trace_mw(D, 128).error;
  CHECK(e128 <= e32);
  CHECK(e128 < tol::trace_abs);
}

TEST_CASE("composition in the oscillator basis") {
  const MWDescriptor J3(standard_J(1), 3), J1(standard_J(1), 1);
  const CompositionResult a = composition_oracle(J3, J3, 64);
  CHECK(a.predicted == IndexMod4(3));
  CHECK(a.agrees());
  CHECK(a.best_residual() < tol::compose_residual);
  CHECK(a.unitarity_defect < tol::unitarity_quarter);
  const CompositionResult b = composition_oracle(J1, J3, 64);
  CHECK(b.predicted == IndexMod4(1));
  CHECK(b.agrees());
  // the other three candidates are far off
  for (int nu = 0; nu < 4; ++nu)
    if (nu != 1) CHECK(b.residuals[nu] > 0.5);
  // J · J⁻¹ = I has eigenvalue 1
  const MWDescriptor Jinv(standard_J(1).inverse(), 1);
  CHECK_THROWS_AS(composition_oracle(J3, Jinv, 64), CompositionDegenerate);
}

}  // TEST_SUITE
