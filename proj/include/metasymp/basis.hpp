#pragma once

// Operators as finite matrices in the oscillator eigenbasis h_0..h_{N−1},
// and the two basis oracles built on them: the trace of R̂_ν(S) and the
// composition law for ν.

#include <array>
#include <cstddef>

#include "metasymp/index_mod4.hpp"
#include "metasymp/weyl.hpp"

namespace metasymp {

struct OperatorMatrix {
  CMat entries;

  std::size_t n_basis() const { return static_cast<std::size_t>(entries.rows()); }
  /// ‖(O†O − I)‖_max restricted to the upper-left (N/2)×(N/2) block.
  double unitarity_defect_quarter() const;
  /// max |O_jk − c·P_jk| over the upper-left quarter block.
  double quarter_residual(const OperatorMatrix& other, Complex c = 1.0) const;
};

/// O_jk = dx Σ conj(h_j) (applier h_k). Throws GridOverflow when
/// grid.x_max < √(2·n_basis) + 4.
OperatorMatrix operator_in_basis(const Applier& applier, std::size_t n_basis, const GridSpec& grid);

/// Diagonal summation weight: 1 for t ≤ ½, then a C^∞ step down to 0 at t = 1.
double taper_weight(double t);

struct TraceResult {
  Complex trace;         // tapered diagonal sum
  Complex partial_sum;   // plain Σ_{k<N} O_kk
  Complex expected;      // i^ν / √|det(S − I)|
  double error = 0.0;    // |trace − expected|
  bool elliptic = true;  // n = 1: |tr S| < 2 or S = −I; the sum need not converge otherwise
  std::size_t n_basis = 0;
};

/// Trace of R̂_ν(S) from the diagonal of operator_in_basis(mw_apply_grid).
/// The operator is unitary, so Σ O_kk oscillates; the reported trace is the
/// tapered (Abel-type) sum, which converges for elliptic S.
TraceResult trace_mw(const MWDescriptor& D, std::size_t n_basis);
TraceResult trace_mw(const MWDescriptor& D, std::size_t n_basis, const GridSpec& grid);

struct CompositionResult {
  IndexMod4 best_nu;                 // ν* whose operator matches R̂₁R̂₂ best
  std::array<double, 4> residuals;   // quarter-block residual for each ν*
  IndexMod4 predicted;               // compose_nu(ν₁, ν₂, M₁, M₂, 1)
  double unitarity_defect = 0.0;     // of the product, quarter block
  bool agrees() const { return best_nu == predicted; }
  double best_residual() const { return residuals[best_nu.value()]; }
};

/// Compares the basis matrix of R̂_{ν₁}(S₁)R̂_{ν₂}(S₂) with that of R̂_{ν*}(S₁S₂)
/// for every ν*. Throws CompositionDegenerate / FixedPointError.
CompositionResult composition_oracle(const MWDescriptor& D1, const MWDescriptor& D2, std::size_t n_basis);
CompositionResult composition_oracle(const MWDescriptor& D1, const MWDescriptor& D2, std::size_t n_basis,
                                     const GridSpec& grid);

}  // namespace metasymp
