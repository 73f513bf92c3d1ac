#pragma once

// Twisted convolution of phase-space functions (n = 1) and the operator
//   a^w f = (1/2π) ∫ a_σ(z) T̂(z) f dz
// built from a twisted symbol a_σ. Composition: (a^w b^w) = c^w with
// c_σ = (1/2π) a_σ ∗_σ b_σ.

#include <functional>

#include "metasymp/gaussian.hpp"
#include "metasymp/grid.hpp"

namespace metasymp {

/// Square grid z_{ij} = ((i − count/2)h, (j − count/2)h), values row-major in i (x).
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(std::size_t count, double h);

  std::size_t count() const { return count_; }
  double h() const { return h_; }
  double coord(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(count_ / 2)) * h_; }

  Complex& at(std::size_t i, std::size_t j) { return values_[i * count_ + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return values_[i * count_ + j]; }
  const std::vector<Complex>& values() const { return values_; }

  /// Fraction of Σ|a|² on the outermost count/16 ring.
  double tail_fraction() const;
  double max_abs_difference(const PhaseSpaceGrid& o) const;

 private:
  std::size_t count_;
  double h_;
  std::vector<Complex> values_;
};

PhaseSpaceGrid sample_symbol(std::size_t count, double h, const std::function<Complex(double, double)>& a);

/// Phase-space Gaussian exp(−½zᵀAz + bᵀz + c), A complex symmetric 2×2.
struct PhaseGaussian {
  CMat A;
  CVec b;
  Complex c;

  Complex operator()(double x, double p) const;
};

/// c(z) = h² Σ_u e^{(i/2)σ(z,u)} a(z − u) b(u), evaluated on the same grid
/// (terms with z − u off the grid are dropped). Throws GridOverflow when
/// either input carries more than tol::twisted_tail of its mass on the rim.
PhaseSpaceGrid twisted_convolution(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b);

/// Closed form of a ∗_σ b for Gaussian symbols. Throws NumericalFailure when
/// the integral does not converge.
PhaseGaussian twisted_convolution_gaussian(const PhaseGaussian& a, const PhaseGaussian& b);

/// (1/2π) h² Σ_z a_σ(z) T̂(z) f. Requires h to be a multiple of f's dx.
GridFunction weyl_apply(const PhaseSpaceGrid& a, const GridFunction& f);

}  // namespace metasymp
