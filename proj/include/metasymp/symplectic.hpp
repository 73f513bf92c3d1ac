#pragma once

// Symplectic linear algebra: Sp(n) membership, free generators (P, L, Q),
// the Cayley-type matrix M_S, determinant identities and the two-factor split.
//
// Conventions: z = (x, p), J = [0 I; −I 0], σ(z, z') = ⟨Jz, z'⟩.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "metasymp/index_mod4.hpp"
#include "metasymp/linalg.hpp"
#include "metasymp/tolerances.hpp"

namespace metasymp {

/// ‖SᵀJS − J‖_max; throws DimensionError on non-square or odd input.
double symplectic_residual(const Mat& S);

bool is_symplectic(const Mat& S, double tol = tol::symplectic);

class SymplecticMatrix {
 public:
  /// Validates SᵀJS = J to tol · max(1, ‖S‖_max²); throws NotSymplectic.
  explicit SymplecticMatrix(Mat entries, double tol = tol::symplectic);

  static SymplecticMatrix identity(int n);

  int n() const { return n_; }
  const Mat& matrix() const { return m_; }

  Mat A() const { return m_.topLeftCorner(n_, n_); }
  Mat B() const { return m_.topRightCorner(n_, n_); }
  Mat C() const { return m_.bottomLeftCorner(n_, n_); }
  Mat D() const { return m_.bottomRightCorner(n_, n_); }

  /// S⁻¹ = −J Sᵀ J, exact in exact arithmetic.
  SymplecticMatrix inverse() const;
  SymplecticMatrix operator*(const SymplecticMatrix& o) const;

  /// det(S − I) by LU.
  double det_minus_identity() const;
  bool is_free() const;

 private:
  struct Unchecked {};
  SymplecticMatrix(Mat entries, Unchecked);

  int n_;
  Mat m_;
};

SymplecticMatrix standard_J(int n);

/// n = 1 rotation [[cos θ, sin θ], [−sin θ, cos θ]]; rotation(π/2) = J.
SymplecticMatrix rotation(double theta);

/// Quadratic form W(x,x') = ½⟨Px,x⟩ − ⟨Lx,x'⟩ + ½⟨Qx',x'⟩ with optional
/// Maslov index m (m even iff det L > 0).
class FreeGenerator {
 public:
  FreeGenerator(Mat P, Mat L, Mat Q, std::optional<IndexMod4> m = std::nullopt);

  int n() const { return static_cast<int>(P_.rows()); }
  const Mat& P() const { return P_; }
  const Mat& L() const { return L_; }
  const Mat& Q() const { return Q_; }
  const std::optional<IndexMod4>& m() const { return m_; }

  /// Same quadratic form on another metaplectic sheet / index choice.
  FreeGenerator with_m(IndexMod4 m) const;
  FreeGenerator without_m() const;

 private:
  Mat P_, L_, Q_;
  std::optional<IndexMod4> m_;
};

/// Real symmetric 2n×2n matrix in the image of S ↦ ½J(S+I)(S−I)⁻¹.
class CayleySymmetric {
 public:
  /// Stores the symmetric part; throws SymmetryError when the input is not
  /// symmetric to 1e-8 relative, DimensionError on odd size.
  explicit CayleySymmetric(Mat M);

  int n() const { return static_cast<int>(M_.rows() / 2); }
  const Mat& matrix() const { return M_; }

 private:
  Mat M_;
};

/// Data of R̂_ν(S): fixed-point-free S together with ν mod 4.
class MWDescriptor {
 public:
  /// Throws FixedPointError when det(S − I) does not clear tol::det.
  MWDescriptor(SymplecticMatrix S, IndexMod4 nu);

  const SymplecticMatrix& S() const { return S_; }
  IndexMod4 nu() const { return nu_; }
  const CayleySymmetric& M() const { return M_; }
  double det_s_minus_i() const { return det_; }

 private:
  SymplecticMatrix S_;
  IndexMod4 nu_;
  CayleySymmetric M_;
  double det_;
};

/// P = DB⁻¹, L = B⁻¹, Q = B⁻¹A. Throws NotFree when det B ≈ 0.
FreeGenerator generator_from_free(const SymplecticMatrix& S);

/// S_W = [L⁻¹Q, L⁻¹; PL⁻¹Q − Lᵀ, PL⁻¹].
SymplecticMatrix matrix_from_generator(const FreeGenerator& W);

/// W*(x,x') = −W(x',x), m* = n − m. Requires m.
FreeGenerator generator_inverse(const FreeGenerator& W);

/// M_S = ½J(S+I)(S−I)⁻¹. Throws FixedPointError.
CayleySymmetric cayley_M(const SymplecticMatrix& S);

/// ‖X − Xᵀ‖_max / max(1, ‖X‖_max) for X = ½J(S+I)(S−I)⁻¹ before symmetrisation.
double cayley_asymmetry(const SymplecticMatrix& S);

/// S = (M − ½J)⁻¹(M + ½J). Throws CayleyDomainError.
SymplecticMatrix inverse_cayley(const CayleySymmetric& M);

/// W_xx = P + Q − L − Lᵀ, the Hessian of x ↦ W(x,x).
Mat hessian_Wxx(const FreeGenerator& W);

/// (−1)ⁿ det(L⁻¹) det(W_xx).
double det_S_minus_I(const FreeGenerator& W);

/// det(S − I) written through the blocks of a free S:
/// (−1)ⁿ det B · det(B⁻¹A + DB⁻¹ − B⁻¹ − B⁻ᵀ).
double det_S_minus_I_blocks(const SymplecticMatrix& S);

/// det(−B) · det(C − (D − I)B⁻¹(A − I)), from the block factorisation of S − I.
double det_S_minus_I_factored(const SymplecticMatrix& S);

struct PairingSides {
  double lhs;  // ⟨M_S(0,p₀),(0,p₀)⟩
  double rhs;  // −⟨W_xx⁻¹p₀,p₀⟩
};

/// Both sides of the M_S / W_xx pairing identity. Throws DegenerateHessian.
PairingSides hessian_pairing(const SymplecticMatrix& S, const Vec& p0);

/// Matrices of V_{−P}, M_L, J, V_{−Q} whose ordered product is S_W:
/// V_{−R} ↦ [I 0; R I], M_L ↦ [L⁻¹ 0; 0 Lᵀ].
std::array<SymplecticMatrix, 4> free_factorization(const FreeGenerator& W);

struct FreePair {
  FreeGenerator first;
  FreeGenerator second;
  double lambda = 0.0;        // shift applied (Q₁ − λ, P₂ + λ)
  std::size_t attempts = 0;   // candidates examined
};

struct SplitOptions {
  std::size_t first_candidate = 0;  // skip this many seed generators (yields a different split)
  std::size_t max_attempts = 64;
};

/// S = S_{W₁} S_{W₂} with both factors free and fixed-point-free.
/// Seeds with S₀ from a fixed list of simple free generators, then sweeps the
/// shift (P₂, Q₁) → (P₂ + λ, Q₁ − λ), which leaves the product unchanged.
FreePair split_into_free_pair(const SymplecticMatrix& S, const SplitOptions& opts = {});

/// SplitMix64 step; used for every seed derivation in the project.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Symmetric P, Q with entries U[−1,1]; L = I + U[−1,1] with the first row
/// negated on a fair coin, re-drawn until |det L| > 0.1. m is set to the
/// smallest admissible value.
FreeGenerator random_free(int n, std::uint64_t seed);

/// Product of k matrices S_W with W = random_free(n, ·).
SymplecticMatrix random_symplectic(int n, std::uint64_t seed, int k);

}  // namespace metasymp
