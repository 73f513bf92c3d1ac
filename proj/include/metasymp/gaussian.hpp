#pragma once

// Closed-form Gaussian calculus. A QuadraticExponent represents
//   v ↦ exp(−½ vᵀA v + bᵀv + c),   v ∈ ℝᵏ, A complex symmetric,
// and integrating a variable out yields another QuadraticExponent. This is
// enough to evaluate every phase-space integral in this library on Gaussian
// inputs exactly (oscillatory directions are taken as Fresnel limits).

#include <complex>
#include <vector>

#include "metasymp/grid.hpp"
#include "metasymp/linalg.hpp"

namespace metasymp {

class QuadraticExponent {
 public:
  explicit QuadraticExponent(int vars);
  QuadraticExponent(CMat A, CVec b, Complex c);

  int vars() const { return static_cast<int>(b_.size()); }
  const CMat& A() const { return A_; }
  const CVec& b() const { return b_; }
  Complex c() const { return c_; }

  /// E(T w) for a real k×k' matrix T: the result has k' variables.
  QuadraticExponent substitute(const Mat& T) const;

  /// Adds the bilinear term β (u·v)(w·v).
  QuadraticExponent& add_bilinear(Complex beta, const Vec& u, const Vec& w);
  /// Adds −½ vᵀ dA v (dA symmetrised).
  QuadraticExponent& add_quadratic(const CMat& dA);
  QuadraticExponent& add_linear(const CVec& db);
  QuadraticExponent& add_constant(Complex dc);

  /// Product of two exponentials on the same variables.
  QuadraticExponent operator+(const QuadraticExponent& o) const;

  /// ∫ dv_index, using ∫ exp(−½at² + βt) dt = √(2π/a) exp(β²/2a), principal
  /// branch (Re a ≥ 0; Re a = 0 is the Fresnel limit). Throws NumericalFailure
  /// when Re a < 0 or a ≈ 0.
  QuadraticExponent integrate_out(int index) const;

  /// Integrates variables [first, vars()) greedily, always taking the variable
  /// with the largest Re A_ii next.
  QuadraticExponent integrate_trailing(int first) const;

  Complex log_value(const Vec& v) const;
  Complex value(const Vec& v) const { return std::exp(log_value(v)); }

 private:
  CMat A_;
  CVec b_;
  Complex c_;
};

/// Applies T̂(w) with w = (Wx·v, Wp·v) to an exponent whose variable 0 is x:
///   E(x, v) ↦ exp(i(w_p x − ½ w_p w_x)) E(x − w_x, v).
/// Wx, Wp are row vectors over all variables; their entry 0 must be zero.
QuadraticExponent apply_translation(const QuadraticExponent& e, const Vec& Wx, const Vec& Wp);

/// g(x) = exp(c − ½w(x − x₀)² + ip₀(x − x₀)),  Re w > 0.
struct GaussianState {
  double x0 = 0.0;
  double p0 = 0.0;
  Complex width{1.0, 0.0};
  Complex log_amplitude{0.0, 0.0};

  /// Normalised standard Gaussian π^{−1/4} e^{−x²/2}.
  static GaussianState standard(double x0 = 0.0, double p0 = 0.0);

  /// From a 1-variable exponent. Throws NumericalFailure if Re A ≤ 0.
  static GaussianState from_exponent(const QuadraticExponent& e);
  QuadraticExponent exponent() const;

  Complex operator()(double x) const;
  double norm() const;  // closed form e^{Re c} (π/Re w)^{1/4}
  GridFunction sample(const GridSpec& grid) const;

  GaussianState scaled(Complex factor) const;
};

/// ‖g − h‖ by trapezoid quadrature on a grid adapted to both states.
double l2_distance(const GaussianState& g, const GaussianState& h);

}  // namespace metasymp
