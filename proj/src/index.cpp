#include "metasymp/index.hpp"

#include <algorithm>
#include <cmath>

#include "metasymp/errors.hpp"

namespace metasymp {

InertiaData inertia(const Mat& R, double zero_tol) {
  if (R.rows() != R.cols()) throw DimensionError("inertia needs a square matrix");
  if (max_abs(R - R.transpose()) > tol::symplectic * std::max(1.0, max_abs(R)))
    throw SymmetryError("inertia needs a symmetric matrix");
  InertiaData d;
  if (R.size() == 0) return d;
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym_part(R), Eigen::EigenvaluesOnly);
  const Vec& ev = eig.eigenvalues();
  if (zero_tol < 0.0) zero_tol = 1e-8 * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k)) <= zero_tol)
      ++d.zeros;
    else if (ev(k) < 0)
      ++d.negatives;
    else
      ++d.positives;
  }
  return d;
}

std::pair<IndexMod4, IndexMod4> maslov_choices(const Mat& L) {
  const double d = L.determinant();
  if (!det_clears(d, L)) throw NotFree("L is singular");
  return d > 0 ? std::pair{IndexMod4(0), IndexMod4(2)} : std::pair{IndexMod4(1), IndexMod4(3)};
}

IndexMod4 nu_from_generator(const FreeGenerator& W) {
  if (!W.m()) throw InvalidGenerator("nu_from_generator needs the Maslov index m");
  const Mat Wxx = hessian_Wxx(W);
  if (!det_clears(Wxx.determinant(), Wxx))
    throw DegenerateHessian("W_xx is singular, so det(S_W - I) = 0");
  return *W.m() - IndexMod4(inertia(Wxx).negatives);
}

namespace {

double checked_det_minus_identity(const SymplecticMatrix& S) {
  const Mat SmI = S.matrix() - Mat::Identity(2 * S.n(), 2 * S.n());
  const double d = SmI.determinant();
  if (!det_clears(d, SmI)) throw FixedPointError("S has eigenvalue 1");
  return d;
}

}  // namespace

bool check_arg_det_relation(const SymplecticMatrix& S, IndexMod4 nu) {
  const double d = checked_det_minus_identity(S);
  const bool even = (IndexMod4(S.n()) - nu).parity() == 0;
  return (d > 0) == even;
}

CzParity cz_parity(const SymplecticMatrix& S, IndexMod4 nu) {
  const double d = checked_det_minus_identity(S);
  // sign det(S − I) = (−1)^{n − μ}: positive means μ ≡ n (mod 2).
  const int mu = d > 0 ? S.n() % 2 : (S.n() + 1) % 2;
  return {mu, mu == nu.parity()};
}

int cz_parity_from_generator(const FreeGenerator& W) {
  if (!W.m()) throw InvalidGenerator("cz_parity_from_generator needs the Maslov index m");
  const Mat Wxx = hessian_Wxx(W);
  if (!det_clears(Wxx.determinant(), Wxx)) throw DegenerateHessian("W_xx is singular");
  // m − Inert W_xx, which is ν; the variant with an extra n disagrees for odd n (S = J).
  return (*W.m() - IndexMod4(inertia(Wxx).negatives)).parity();
}

IndexMod4 compose_nu(IndexMod4 nu1, IndexMod4 nu2, const CayleySymmetric& M1, const CayleySymmetric& M2,
                     int n) {
  if (M1.n() != n || M2.n() != n) throw DimensionError("compose_nu: dimension mismatch");
  const Mat sum = M1.matrix() + M2.matrix();
  if (!det_clears(sum.determinant(), sum))
    throw CompositionDegenerate("M + M' is singular, so the product has eigenvalue 1");
  return nu1 + nu2 + IndexMod4(n) - IndexMod4(inertia(sum).negatives);
}

Cl1Sides cl1_sides(const FreeGenerator& W1, const FreeGenerator& W2) {
  const SymplecticMatrix S1 = matrix_from_generator(W1);
  const SymplecticMatrix S2 = matrix_from_generator(W2);
  const CayleySymmetric M1 = cayley_M(S1);
  const CayleySymmetric M2 = cayley_M(S2);
  const double lhs = S1.det_minus_identity() * S2.det_minus_identity() *
                     Mat(M1.matrix() + M2.matrix()).determinant();
  return {lhs, (S1 * S2).det_minus_identity()};
}

bool cl1_check(const FreeGenerator& W1, const FreeGenerator& W2, double rel_tol) {
  const Cl1Sides s = cl1_sides(W1, W2);
  return std::abs(s.lhs - s.rhs) <= rel_tol * std::max({std::abs(s.lhs), std::abs(s.rhs), 1.0});
}

}  // namespace metasymp
