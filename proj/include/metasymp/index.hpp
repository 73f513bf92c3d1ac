#pragma once

#include <utility>

#include "metasymp/index_mod4.hpp"
#include "metasymp/symplectic.hpp"

namespace metasymp {

struct InertiaData {
  int negatives = 0;  // Inert R
  int positives = 0;
  int zeros = 0;

  int dimension() const { return negatives + positives + zeros; }
  int signature() const { return positives - negatives; }
  bool degenerate() const { return zeros > 0; }
};

/// Eigenvalue counts of a symmetric matrix. Eigenvalues with |λ| ≤ zero_tol
/// count as zeros; zero_tol < 0 selects the default 1e-8 · ‖R‖₂.
/// Throws SymmetryError.
InertiaData inertia(const Mat& R, double zero_tol = -1.0);

/// The two admissible m with mπ ≡ arg det L (mod 2π): {0,2} or {1,3}.
std::pair<IndexMod4, IndexMod4> maslov_choices(const Mat& L);

/// ν ≡ m − Inert W_xx (mod 4). Throws DegenerateHessian, InvalidGenerator (no m).
IndexMod4 nu_from_generator(const FreeGenerator& W);

/// sign det(S − I) = (−1)^{n−ν}. Throws FixedPointError.
bool check_arg_det_relation(const SymplecticMatrix& S, IndexMod4 nu);

struct CzParity {
  int mu_mod2;           // μ_CZ mod 2 from sign det(S − I) = (−1)^{n−μ_CZ}
  bool matches_nu;       // ν ≡ μ_CZ (mod 2)
};

CzParity cz_parity(const SymplecticMatrix& S, IndexMod4 nu);

/// μ_CZ mod 2 predicted from the generator: m − Inert W_xx.
int cz_parity_from_generator(const FreeGenerator& W);

/// ν(SS') = ν + ν' + n − Inert(M + M'). Throws CompositionDegenerate.
IndexMod4 compose_nu(IndexMod4 nu1, IndexMod4 nu2, const CayleySymmetric& M1,
                     const CayleySymmetric& M2, int n);

struct Cl1Sides {
  double lhs;  // det(S_W − I) det(S_W' − I) det(M + M')
  double rhs;  // det(S_W S_W' − I)
};

Cl1Sides cl1_sides(const FreeGenerator& W1, const FreeGenerator& W2);

/// True iff |lhs − rhs| ≤ rel_tol · max(|lhs|, |rhs|, 1). Throws FixedPointError
/// if either factor has eigenvalue 1.
bool cl1_check(const FreeGenerator& W1, const FreeGenerator& W2, double rel_tol = tol::cl1_rel);

}  // namespace metasymp
