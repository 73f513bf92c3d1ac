#pragma once

// Operator-level realisations at n = 1: quadratic Fourier transforms Ŝ_{W,m},
// Mehlig–Wilkinson operators R̂_ν(S) (grid kernels and closed Gaussian
// forms), the equivalent integral forms, and metaplectic covariance.

#include <functional>
#include <memory>
#include <vector>

#include "metasymp/gaussian.hpp"
#include "metasymp/grid.hpp"
#include "metasymp/symplectic.hpp"
#include "metasymp/tolerances.hpp"

namespace metasymp {

using Applier = std::function<GridFunction(const GridFunction&)>;

/// Dense integral operator (Kf)(x_j) = Σ_k K_jk f_k on a fixed grid. The
/// quadrature weight dx is folded into K.
class KernelOperator {
 public:
  KernelOperator(GridSpec grid, std::vector<Complex> rowmajor);

  const GridSpec& grid() const { return grid_; }
  Complex entry(std::size_t j, std::size_t k) const { return kernel_[j * grid_.N + k]; }

  /// Throws GridOverflow if input or output tail exceeds tail_limit.
  GridFunction apply(const GridFunction& f, double tail_limit = tol::grid_tail) const;

  /// Shares the kernel; safe to call from several threads.
  Applier applier(double tail_limit = tol::grid_tail) const;

 private:
  GridSpec grid_;
  std::shared_ptr<const std::vector<Complex>> kernel_holder_;
  const Complex* kernel_;
};

/// Kernel of Ŝ_{W,m} (n = 1):
/// (2πi)^{−1/2} i^m √|L| e^{iW(x,x')}, principal branch (2πi)^{−1/2} = (2π)^{−1/2}e^{−iπ/4}.
/// Throws NumericalFailure if e^{iW} is not resolved by the grid.
KernelOperator quad_fourier_kernel(const FreeGenerator& W, const GridSpec& grid);
GridFunction quad_fourier_apply(const FreeGenerator& W, const GridFunction& f);

/// Closed-form Ŝ_{W,m} on a Gaussian.
GaussianState quad_fourier_gaussian(const FreeGenerator& W, const GaussianState& g);

enum class MwStrategy {
  automatic,  // fresnel when |M₂₂| clears tol::det, otherwise delta
  fresnel,    // analytic p₀ integral by the Fresnel formula
  damped,     // p₀ integral with e^{−εp₀²}, extrapolated ε → 0
  delta,      // M₂₂ = 0: p₀ integral is 2πδ, off-grid values by periodic sinc
};

struct MwKernelOptions {
  MwStrategy strategy = MwStrategy::automatic;
  std::vector<double> damping = {1e-2, 5e-3, 2.5e-3};
};

/// Grid kernel of R̂_ν(S) (n = 1), with the x₀ integral done by quadrature.
KernelOperator mw_kernel(const MWDescriptor& D, const GridSpec& grid, const MwKernelOptions& opts = {});
GridFunction mw_apply_grid(const MWDescriptor& D, const GridFunction& f, const MwKernelOptions& opts = {});

/// R̂_ν(S)g in closed form, including the global phase.
GaussianState mw_apply_gaussian(const MWDescriptor& D, const GaussianState& g);

/// (1/2π) i^ν √|det(S−I)| ∫ e^{−(i/2)σ(Sz,z)} T̂((S−I)z) g dz
GaussianState mw_apply_gaussian_sigma_form(const MWDescriptor& D, const GaussianState& g);
/// (1/2π) i^ν √|det(S−I)| ∫ T̂(Sz) T̂(−z) g dz
GaussianState mw_apply_gaussian_product_form(const MWDescriptor& D, const GaussianState& g);

struct AltFormsResidual {
  double sigma_form;    // ‖σ-form − Bochner form‖ / ‖g‖
  double product_form;  // ‖product form − Bochner form‖ / ‖g‖
};

AltFormsResidual alt_forms_residual(const MWDescriptor& D, const GaussianState& g);

/// ‖Ŝ T̂(z) f − T̂(Sz) Ŝ f‖ / ‖f‖ for an applier Ŝ projecting onto S (n = 1).
double covariance_residual(const Applier& apply_S, const SymplecticMatrix& S, PhasePoint z,
                           const GridFunction& f);

/// Lagrange weights for extrapolating samples at the given abscissae to 0.
std::vector<double> extrapolation_weights(const std::vector<double>& eps);

}  // namespace metasymp
