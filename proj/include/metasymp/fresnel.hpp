#pragma once

// Generalised Fresnel integral
//   (2π)^{−m/2} ∫ e^{−i⟨v,u⟩} e^{(i/2)⟨Mu,u⟩} dᵐu
//     = |det M|^{−1/2} e^{(iπ/4) sgn M} e^{−(i/2)⟨M⁻¹v,v⟩}.

#include <vector>

#include "metasymp/linalg.hpp"

namespace metasymp {

/// Closed form. Throws FresnelDegenerate if det M does not clear tol::det,
/// SymmetryError if M is not symmetric.
Complex fresnel_closed(const Mat& M, const Vec& v);

struct FresnelNumeric {
  Complex value;
  std::vector<Complex> samples;  // damped integral at each ε
  double spread = 0.0;           // |extrapolation − extrapolation without the largest ε|
};

/// Damped quadrature with regulator e^{−ε|u|²} for each ε, Lagrange-extrapolated
/// to ε = 0. M is diagonalised first so each ε needs m one-dimensional
/// trapezoid sums. Throws NumericalFailure when the extrapolation does not
/// settle (spread above 1e-5 relative).
FresnelNumeric fresnel_numeric(const Mat& M, const Vec& v,
                               const std::vector<double>& eps = {1e-3, 5e-4, 2.5e-4, 1.25e-4});

}  // namespace metasymp
