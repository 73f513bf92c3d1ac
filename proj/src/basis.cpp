#include "metasymp/basis.hpp"

#include <cmath>
#include <sstream>

#include "metasymp/errors.hpp"
#include "metasymp/index.hpp"
#include "metasymp/simd/kernels.hpp"

namespace metasymp {

namespace {

// Basis columns may leak slightly more than a Schwartz test function near the
// top of the truncated basis; the quarter-block checks absorb that.
constexpr double kBasisTail = 1e-4;

void require_basis_grid(std::size_t n_basis, const GridSpec& grid) {
  if (n_basis < 2 || n_basis > 256) throw DimensionError("n_basis must lie in [2, 256]");
  const double need = std::sqrt(2.0 * static_cast<double>(n_basis)) + 4.0;
  if (grid.x_max < need) {
    std::ostringstream os;
    os << "grid x_max = " << grid.x_max << " is too small for " << n_basis << " Hermite functions (need >= " << need
       << ")";
    throw GridOverflow(os.str());
  }
}

}  // namespace

double OperatorMatrix::unitarity_defect_quarter() const {
  const Eigen::Index q = entries.rows() / 2;
  const CMat G = entries.adjoint() * entries;
  return (G.topLeftCorner(q, q) - CMat::Identity(q, q)).cwiseAbs().maxCoeff();
}

double OperatorMatrix::quarter_residual(const OperatorMatrix& other, Complex c) const {
  if (other.entries.rows() != entries.rows()) throw DimensionError("operator matrices differ in size");
  const Eigen::Index q = entries.rows() / 2;
  return (entries.topLeftCorner(q, q) - c * other.entries.topLeftCorner(q, q)).cwiseAbs().maxCoeff();
}

OperatorMatrix operator_in_basis(const Applier& applier, std::size_t n_basis, const GridSpec& grid) {
  require_basis_grid(n_basis, grid);
  const std::vector<GridFunction> h = hermite_functions(grid, n_basis);
  OperatorMatrix O{CMat(n_basis, n_basis)};
  for (std::size_t k = 0; k < n_basis; ++k) {
    const GridFunction col = applier(h[k]);
    for (std::size_t j = 0; j < n_basis; ++j) O.entries(j, k) = h[j].inner(col);
  }
  return O;
}

double taper_weight(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  auto f = [](double a) { return a > 0.0 ? std::exp(-1.0 / a) : 0.0; };
  const double u = (t - 0.5) / 0.5;
  return f(1.0 - u) / (f(1.0 - u) + f(u));
}

TraceResult trace_mw(const MWDescriptor& D, std::size_t n_basis) { return trace_mw(D, n_basis, basis_grid(n_basis)); }

TraceResult trace_mw(const MWDescriptor& D, std::size_t n_basis, const GridSpec& grid) {
  require_basis_grid(n_basis, grid);
  const KernelOperator K = mw_kernel(D, grid);
  const std::vector<GridFunction> h = hermite_functions(grid, n_basis);
  TraceResult r;
  r.n_basis = n_basis;
  r.trace = 0.0;
  r.partial_sum = 0.0;
  for (std::size_t k = 0; k < n_basis; ++k) {
    const Complex d = h[k].inner(K.apply(h[k], kBasisTail));
    r.partial_sum += d;
    r.trace += taper_weight(static_cast<double>(k) / static_cast<double>(n_basis)) * d;
  }
  r.expected = D.nu().i_power() / std::sqrt(std::abs(D.det_s_minus_i()));
  r.error = std::abs(r.trace - r.expected);
  if (D.S().n() == 1) {
    const Mat& S = D.S().matrix();
    // conjugate to a rotation: |tr S| < 2, or S = −I (S = I has no trace formula)
    r.elliptic = std::abs(S(0, 0) + S(1, 1)) < 2.0 || max_abs(S + Mat::Identity(2, 2)) <= tol::symplectic;
  } else {
    r.elliptic = false;
  }
  return r;
}

CompositionResult composition_oracle(const MWDescriptor& D1, const MWDescriptor& D2, std::size_t n_basis) {
  return composition_oracle(D1, D2, n_basis, basis_grid(n_basis));
}

CompositionResult composition_oracle(const MWDescriptor& D1, const MWDescriptor& D2, std::size_t n_basis,
                                     const GridSpec& grid) {
  const SymplecticMatrix S12 = D1.S() * D2.S();
  CompositionResult r;
  r.predicted = compose_nu(D1.nu(), D2.nu(), D1.M(), D2.M(), D1.S().n());
  const MWDescriptor D12(S12, IndexMod4(0));

  const OperatorMatrix O1 = operator_in_basis(mw_kernel(D1, grid).applier(kBasisTail), n_basis, grid);
  const OperatorMatrix O2 = operator_in_basis(mw_kernel(D2, grid).applier(kBasisTail), n_basis, grid);
  const OperatorMatrix O12 = operator_in_basis(mw_kernel(D12, grid).applier(kBasisTail), n_basis, grid);
  const OperatorMatrix product{O1.entries * O2.entries};
  r.unitarity_defect = product.unitarity_defect_quarter();

  int best = 0;
  for (int nu = 0; nu < 4; ++nu) {
    r.residuals[nu] = product.quarter_residual(O12, IndexMod4(nu).i_power());
    if (r.residuals[nu] < r.residuals[best]) best = nu;
  }
  r.best_nu = IndexMod4(best);
  return r;
}

}  // namespace metasymp
