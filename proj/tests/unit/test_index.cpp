#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "metasymp/errors.hpp"
#include "metasymp/index.hpp"

using namespace metasymp;
using testing::gen1;
using testing::rows;
using testing::scalar;

TEST_SUITE("index") {

TEST_CASE("IndexMod4 arithmetic") {
  CHECK(IndexMod4(7).value() == 3);
  CHECK(IndexMod4(-1).value() == 3);
  CHECK((IndexMod4(3) + IndexMod4(3)).value() == 2);
  CHECK((IndexMod4(1) - IndexMod4(3)).value() == 2);
  CHECK(IndexMod4(3).i_power() == Complex(0, -1));
  CHECK(IndexMod4(2).parity() == 0);
}

TEST_CASE("inertia") {
  const InertiaData a = inertia(rows({{2, 0}, {0, -3}}));
  CHECK(a.negatives == 1);
  CHECK(a.positives == 1);
  CHECK(a.signature() == 0);
  const InertiaData b = inertia(hessian_Wxx(gen1(0, 1, 0, 0)));
  CHECK(b.negatives == 1);
  CHECK(b.signature() == -1);
  const InertiaData z = inertia(Mat::Zero(2, 2));
  CHECK(z.zeros == 2);
  CHECK(z.signature() == 0);
  CHECK_THROWS_AS(inertia(rows({{0, 1}, {0, 0}})), SymmetryError);
}

TEST_CASE("inertia is a congruence invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 8;
    Vec lam(d);
    for (int i = 0; i < d; ++i) lam(i) = (u(rng) < 0 ? -1.0 : 1.0) * (0.2 + std::abs(u(rng)));
    Mat Q = Mat::Random(d, d);
    const Mat O = Eigen::HouseholderQR<Mat>(Q).householderQ();
    const Mat R = O * lam.asDiagonal() * O.transpose();
    Mat G;
    do {
      G = Mat::Identity(d, d) + 0.5 * Mat::Random(d, d);
    } while (std::abs(G.determinant()) < 0.1);
    const InertiaData before = inertia(sym_part(R)), after = inertia(sym_part(G.transpose() * R * G));
    CHECK(before.negatives == after.negatives);
    CHECK(before.positives == after.positives);
  }
}

TEST_CASE("Maslov index choices") {
  CHECK(maslov_choices(scalar(1)) == std::pair{IndexMod4(0), IndexMod4(2)});
  CHECK(maslov_choices(scalar(-1)) == std::pair{IndexMod4(1), IndexMod4(3)});
  CHECK(maslov_choices(rows({{1, 0}, {0, -1}})) == std::pair{IndexMod4(1), IndexMod4(3)});
}

TEST_CASE("nu from a generator") {
  CHECK(nu_from_generator(gen1(0, 1, 0, 0)) == IndexMod4(3));
  CHECK(nu_from_generator(gen1(0, 1, 0, 2)) == IndexMod4(1));
  CHECK(nu_from_generator(gen1(2, 1, 2, 0)) == IndexMod4(0));
  CHECK_THROWS_AS(nu_from_generator(gen1(1, 1, 1, 0)), DegenerateHessian);
  CHECK_THROWS_AS(nu_from_generator(FreeGenerator(scalar(0), scalar(1), scalar(0))), InvalidGenerator);
}

TEST_CASE("sign of det(S - I)") {
  CHECK(check_arg_det_relation(standard_J(1), IndexMod4(3)));
  CHECK_FALSE(check_arg_det_relation(standard_J(1), IndexMod4(0)));
  CHECK_THROWS_AS(check_arg_det_relation(SymplecticMatrix::identity(1), IndexMod4(0)), FixedPointError);

  int checked = 0;
  for (std::uint64_t s = 0; checked < 500; ++s) {
    const int n = 1 + static_cast<int>(s % 4);
    const FreeGenerator W = random_free(n, 40 + s);
    const SymplecticMatrix S = matrix_from_generator(W);
    if (singularity_margin(S.matrix() - Mat::Identity(2 * n, 2 * n)) < 1e-6) continue;
    const auto [m1, m2] = maslov_choices(W.L());
    const IndexMod4 nu1 = nu_from_generator(W.with_m(m1)), nu2 = nu_from_generator(W.with_m(m2));
    CHECK(check_arg_det_relation(S, nu1));
    CHECK(check_arg_det_relation(S, nu2));
    CHECK(nu2 == nu1 + IndexMod4(2));  // the other sheet
    ++checked;
  }
}

TEST_CASE("Conley-Zehnder parity") {
  const CzParity j = cz_parity(standard_J(1), IndexMod4(3));
  CHECK(j.mu_mod2 == 1);
  CHECK(j.matches_nu);
  const CzParity m = cz_parity(SymplecticMatrix(Mat(-Mat::Identity(2, 2))), IndexMod4(1));
  CHECK(m.mu_mod2 == 1);
  CHECK(m.matches_nu);
  CHECK_FALSE(cz_parity(standard_J(1), IndexMod4(2)).matches_nu);

  for (std::uint64_t s = 0; s < 300; ++s) {
    const int n = 1 + static_cast<int>(s % 4);
    const FreeGenerator W = random_free(n, 800 + s);
    const SymplecticMatrix S = matrix_from_generator(W);
    if (singularity_margin(S.matrix() - Mat::Identity(2 * n, 2 * n)) < 1e-6) continue;
    const CzParity c = cz_parity(S, nu_from_generator(W));
    CHECK(c.matches_nu);
    CHECK(c.mu_mod2 == cz_parity_from_generator(W));
  }
}

TEST_CASE("generator parity with an extra n disagrees for odd n") {
  // μ_CZ ≡ m + n − Inert W_xx would give 0 for W_J (m = 0, n = 1, Inert 1),
  // but sign det(J − I) = +1 forces μ_CZ odd.
  const FreeGenerator WJ = gen1(0, 1, 0, 0);
  const int with_n = (*WJ.m() + IndexMod4(1) - IndexMod4(inertia(hessian_Wxx(WJ)).negatives)).parity();
  CHECK(with_n == 0);
  CHECK(cz_parity(standard_J(1), nu_from_generator(WJ)).mu_mod2 == 1);
  CHECK(cz_parity_from_generator(WJ) == 1);
}

TEST_CASE("composition index") {
  const CayleySymmetric MJ = cayley_M(standard_J(1));
  CHECK(compose_nu(3, 3, MJ, MJ, 1) == IndexMod4(3));
  CHECK(compose_nu(1, 3, MJ, MJ, 1) == IndexMod4(1));
  const CayleySymmetric P(Mat::Identity(4, 4));
  CHECK(compose_nu(0, 0, P, P, 2) == IndexMod4(2));
  const CayleySymmetric N(Mat(-Mat::Identity(4, 4)));
  CHECK_THROWS_AS(compose_nu(0, 0, P, N, 2), CompositionDegenerate);
  CHECK_THROWS_AS(compose_nu(0, 0, MJ, MJ, 2), DimensionError);
}

TEST_CASE("determinant identity for products") {
  const Cl1Sides s = cl1_sides(gen1(0, 1, 0, 0), gen1(0, 1, 0, 0));
  CHECK(s.lhs == doctest::Approx(4.0));
  CHECK(s.rhs == doctest::Approx(4.0));
  CHECK(cl1_check(gen1(0, 1, 0, 0), gen1(0, 1, 0, 0)));

  int checked = 0;
  for (std::uint64_t t = 0; checked < 1000; ++t) {
    const int n = 1 + static_cast<int>(t % 3);
    const FreeGenerator W1 = random_free(n, 2 * t), W2 = random_free(n, 2 * t + 1);
    const Mat I = Mat::Identity(2 * n, 2 * n);
    const SymplecticMatrix S1 = matrix_from_generator(W1), S2 = matrix_from_generator(W2);
    if (singularity_margin(S1.matrix() - I) < 1e-3 || singularity_margin(S2.matrix() - I) < 1e-3 ||
        singularity_margin((S1 * S2).matrix() - I) < 1e-3)
      continue;
    CHECK(cl1_check(W1, W2));
    ++checked;
  }
}

TEST_CASE("determinant identity when the product has eigenvalue 1") {
  // S_W' = S_W⁻¹: SS' = I
  const FreeGenerator W = gen1(0.3, 1.2, -0.4, 0);
  const FreeGenerator Wi = generator_inverse(W);
  const Cl1Sides s = cl1_sides(W, Wi);
  CHECK(std::abs(s.rhs) < 1e-12);
  CHECK(std::abs(s.lhs) < 1e-9);
}

}  // TEST_SUITE
