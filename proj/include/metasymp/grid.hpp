#pragma once

// Uniform 1D grids, sampled functions and the Heisenberg–Weyl operators T̂(z₀).

#include <cstddef>
#include <vector>

#include "metasymp/linalg.hpp"

namespace metasymp {

/// Grid x_j = −x_max + j·dx, j = 0..N−1, dx = 2·x_max/N, N a power of two.
struct GridSpec {
  double x_max = 12.0;
  std::size_t N = 1024;

  double dx() const { return 2.0 * x_max / static_cast<double>(N); }
  double x(std::size_t j) const { return -x_max + static_cast<double>(j) * dx(); }
  /// Throws DimensionError.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Grid large enough for the first n_basis Hermite functions:
/// x_max = √(2·n_basis) + 5, dx ≲ 0.021.
GridSpec basis_grid(std::size_t n_basis);

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

/// σ(z, z') = p·x' − p'·x
inline double sigma(PhasePoint z, PhasePoint w) { return z.p * w.x - w.p * z.x; }

class GridFunction {
 public:
  explicit GridFunction(GridSpec grid);
  GridFunction(GridSpec grid, std::vector<Complex> values);

  template <class F>
  static GridFunction sample(GridSpec grid, F&& f) {
    GridFunction g(grid);
    for (std::size_t j = 0; j < grid.N; ++j) g.values_[j] = f(grid.x(j));
    return g;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t j) const { return grid_.x(j); }

  Complex& operator[](std::size_t j) { return values_[j]; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }

  /// (dx Σ|f|²)^{1/2}
  double norm() const;
  /// dx Σ conj(f) g
  Complex inner(const GridFunction& g) const;
  /// ‖f − g‖
  double distance(const GridFunction& g) const;
  /// Fraction of ‖f‖² carried by the outer N/32 samples at each edge.
  double tail_fraction() const;

  GridFunction& operator+=(const GridFunction& g);
  GridFunction& operator-=(const GridFunction& g);
  GridFunction& operator*=(Complex c);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

 private:
  void require_same_grid(const GridFunction& g) const;

  GridSpec grid_;
  std::vector<Complex> values_;
};

/// Throws GridOverflow if tail_fraction() exceeds limit.
void require_contained(const GridFunction& f, double limit, const char* what);

/// f(x − a) by index translation when a is a multiple of dx, otherwise by a
/// DFT phase ramp (band-limited interpolation).
GridFunction shift(const GridFunction& f, double a);

/// f' by spectral differentiation.
GridFunction spectral_derivative(const GridFunction& f);

/// Phase-space centre (⟨x⟩, ⟨p⟩) of f, p = −i d/dx.
PhasePoint expectation(const GridFunction& f);

/// T̂(z₀)f(x) = e^{i(p₀x − ½p₀x₀)} f(x − x₀). Throws GridOverflow if |x₀| > x_max/2
/// or if the shift would carry more than tol::grid_tail of ‖f‖² off the grid.
GridFunction hw_apply(PhasePoint z0, const GridFunction& f);

struct HwResiduals {
  double commutation;  // ‖T(z₀)T(z₁)f − e^{iσ(z₀,z₁)} T(z₁)T(z₀)f‖
  double composition;  // ‖T(z₀+z₁)f − e^{−iσ(z₀,z₁)/2} T(z₀)T(z₁)f‖
};

HwResiduals hw_commutation_check(PhasePoint z0, PhasePoint z1, const GridFunction& f);

/// Oscillator eigenfunctions h_0..h_{count−1} sampled on the grid, computed by
/// the normalised three-term recurrence with running log-scale.
std::vector<GridFunction> hermite_functions(const GridSpec& grid, std::size_t count);

/// h_k(x) at a single point (same recurrence).
double hermite_function(std::size_t k, double x);

}  // namespace metasymp
