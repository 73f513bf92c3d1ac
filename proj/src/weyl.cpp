#include "metasymp/weyl.hpp"

#include <cmath>
#include <sstream>

#include "metasymp/errors.hpp"
#include "metasymp/simd/kernels.hpp"

namespace metasymp {

namespace {

constexpr Complex I1{0.0, 1.0};

void require_n1(int n, const char* what) {
  if (n != 1) {
    std::ostringstream os;
    os << what << " is implemented for n = 1 only (got n = " << n << ")";
    throw DimensionError(os.str());
  }
}

// Largest |∂φ/∂y| of the linear map (x, y) ↦ a·x + b·y over the grid square.
double max_linear(double a, double b, double x_max) { return (std::abs(a) + std::abs(b)) * x_max; }

void require_resolved(double max_derivative, const GridSpec& grid, const char* what) {
  const double limit = kPi / grid.dx();
  if (!(max_derivative < limit)) {
    std::ostringstream os;
    os << what << ": kernel phase varies at rate " << max_derivative << ", beyond the grid resolution "
       << limit << "; refine the grid";
    throw NumericalFailure(os.str());
  }
}

Complex mw_prefactor(const MWDescriptor& D) {
  return D.nu().i_power() / (2.0 * kPi * std::sqrt(std::abs(D.det_s_minus_i())));
}

// Periodic band-limited interpolation weight for offset t on N samples of spacing h.
double periodic_sinc(double t, double h, std::size_t N) {
  const double u = t / h;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-12) {
    const auto k = static_cast<long long>(r) % static_cast<long long>(N);
    return k == 0 ? 1.0 : 0.0;
  }
  return std::sin(kPi * u) / (static_cast<double>(N) * std::tan(kPi * u / static_cast<double>(N)));
}

std::vector<Complex> fresnel_kernel(const MWDescriptor& D, const GridSpec& grid) {
  const Mat& M = D.M().matrix();
  const double m11 = M(0, 0), m12 = M(0, 1), m22 = M(1, 1);
  const double c = m12 - 0.5;
  // ∂φ/∂y with φ = ½m11(x−y)² − v²/(2m22), v = −(x + c(x−y)); linear in (x, y).
  const double ax = -m11 + c * (1.0 + c) / m22;
  const double ay = m11 - c * c / m22;
  require_resolved(max_linear(ax, ay, grid.x_max), grid, "mw_kernel");

  const Complex pref = mw_prefactor(D) * std::sqrt(2.0 * kPi / std::abs(m22)) *
                       std::polar(1.0, 0.25 * kPi * (m22 > 0 ? 1.0 : -1.0)) * grid.dx();
  const std::size_t N = grid.N;
  std::vector<Complex> K(N * N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = grid.x(j);
    for (std::size_t k = 0; k < N; ++k) {
      const double x0 = x - grid.x(k);
      const double v = x + c * x0;
      K[j * N + k] = pref * std::polar(1.0, 0.5 * m11 * x0 * x0 - 0.5 * v * v / m22);
    }
  }
  return K;
}

std::vector<Complex> delta_kernel(const MWDescriptor& D, const GridSpec& grid) {
  const Mat& M = D.M().matrix();
  const double m11 = M(0, 0), d = 0.5 - M(0, 1);
  if (std::abs(d) < 1e-8) throw NumericalFailure("mw_kernel: degenerate delta route (M12 = 1/2)");
  const double kappa = 1.0 - 1.0 / d;
  const Complex pref = mw_prefactor(D) * (2.0 * kPi / std::abs(d));
  const std::size_t N = grid.N;
  std::vector<Complex> K(N * N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = grid.x(j);
    const double target = kappa * x;
    if (target < -grid.x_max || target >= grid.x_max) continue;
    const double x0 = x / d;
    const Complex row = pref * std::polar(1.0, 0.5 * m11 * x0 * x0);
    for (std::size_t k = 0; k < N; ++k) K[j * N + k] = row * periodic_sinc(target - grid.x(k), grid.dx(), N);
  }
  return K;
}

std::vector<Complex> damped_kernel(const MWDescriptor& D, const GridSpec& grid, const std::vector<double>& eps) {
  if (eps.empty()) throw NumericalFailure("mw_kernel: empty damping list");
  const Mat& M = D.M().matrix();
  const double m11 = M(0, 0), m22 = M(1, 1), c = M(0, 1) - 0.5;
  const std::vector<double> weights = extrapolation_weights(eps);
  const Complex pref = mw_prefactor(D) * grid.dx();
  const std::size_t N = grid.N;
  std::vector<Complex> K(N * N, 0.0);
  for (std::size_t e = 0; e < eps.size(); ++e) {
    // ∫ e^{−½a p² + i w p} dp = √(2π/a) e^{−w²/(2a)},  a = 2ε − i m22
    const Complex a(2.0 * eps[e], -m22);
    const Complex amp = weights[e] * std::sqrt(2.0 * kPi / a);
    for (std::size_t j = 0; j < N; ++j) {
      const double x = grid.x(j);
      for (std::size_t k = 0; k < N; ++k) {
        const double x0 = x - grid.x(k);
        const double w = x + c * x0;
        K[j * N + k] += amp * std::exp(Complex(0.0, 0.5 * m11 * x0 * x0) - w * w / (2.0 * a));
      }
    }
  }
  for (Complex& v : K) v *= pref;
  return K;
}

}  // namespace

std::vector<double> extrapolation_weights(const std::vector<double>& eps) {
  std::vector<double> w(eps.size(), 1.0);
  for (std::size_t i = 0; i < eps.size(); ++i)
    for (std::size_t j = 0; j < eps.size(); ++j)
      if (j != i) w[i] *= -eps[j] / (eps[i] - eps[j]);
  return w;
}

KernelOperator::KernelOperator(GridSpec grid, std::vector<Complex> rowmajor) : grid_(grid) {
  grid_.validate();
  if (rowmajor.size() != grid_.N * grid_.N) throw DimensionError("kernel must be N x N");
  auto holder = std::make_shared<const std::vector<Complex>>(std::move(rowmajor));
  kernel_ = holder->data();
  kernel_holder_ = std::move(holder);
}

GridFunction KernelOperator::apply(const GridFunction& f, double tail_limit) const {
  if (!(f.grid() == grid_)) throw DimensionError("kernel and function live on different grids");
  require_contained(f, tail_limit, "kernel input");
  const std::size_t N = grid_.N;
  GridFunction out(grid_);
  std::span<const Complex> fv(f.values());
  for (std::size_t j = 0; j < N; ++j) out[j] = simd::dotu(std::span<const Complex>(kernel_ + j * N, N), fv);
  require_contained(out, tail_limit, "kernel output");
  return out;
}

Applier KernelOperator::applier(double tail_limit) const {
  return [op = *this, tail_limit](const GridFunction& f) { return op.apply(f, tail_limit); };
}

KernelOperator quad_fourier_kernel(const FreeGenerator& W, const GridSpec& grid) {
  require_n1(W.n(), "quad_fourier_kernel");
  if (!W.m()) throw InvalidGenerator("quadratic Fourier transform needs the Maslov index m");
  const double P = W.P()(0, 0), L = W.L()(0, 0), Q = W.Q()(0, 0);
  require_resolved(max_linear(L, Q, grid.x_max), grid, "quad_fourier_kernel");
  const Complex pref = std::polar(1.0 / std::sqrt(2.0 * kPi), -0.25 * kPi) * W.m()->i_power() *
                       std::sqrt(std::abs(L)) * grid.dx();
  const std::size_t N = grid.N;
  std::vector<Complex> K(N * N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = grid.x(j);
    for (std::size_t k = 0; k < N; ++k) {
      const double y = grid.x(k);
      K[j * N + k] = pref * std::polar(1.0, 0.5 * P * x * x - L * x * y + 0.5 * Q * y * y);
    }
  }
  return KernelOperator(grid, std::move(K));
}

GridFunction quad_fourier_apply(const FreeGenerator& W, const GridFunction& f) {
  return quad_fourier_kernel(W, f.grid()).apply(f);
}

GaussianState quad_fourier_gaussian(const FreeGenerator& W, const GaussianState& g) {
  require_n1(W.n(), "quad_fourier_gaussian");
  if (!W.m()) throw InvalidGenerator("quadratic Fourier transform needs the Maslov index m");
  const double P = W.P()(0, 0), L = W.L()(0, 0), Q = W.Q()(0, 0);
  // variables (x, x'); g depends on x'
  Mat T(1, 2);
  T << 0.0, 1.0;
  QuadraticExponent e = g.exponent().substitute(T);
  CMat dA(2, 2);
  dA << -I1 * P, I1 * L, I1 * L, -I1 * Q;
  e.add_quadratic(dA);
  e.add_constant(-0.5 * std::log(2.0 * kPi) - I1 * (0.25 * kPi) + I1 * (0.5 * kPi * W.m()->value()) +
                 0.5 * std::log(std::abs(L)));
  return GaussianState::from_exponent(e.integrate_trailing(1));
}

KernelOperator mw_kernel(const MWDescriptor& D, const GridSpec& grid, const MwKernelOptions& opts) {
  require_n1(D.S().n(), "mw_kernel");
  grid.validate();
  const double m22 = D.M().matrix()(1, 1);
  MwStrategy strategy = opts.strategy;
  if (strategy == MwStrategy::automatic)
    strategy = std::abs(m22) > tol::det * std::max(1.0, max_abs(D.M().matrix())) ? MwStrategy::fresnel
                                                                                  : MwStrategy::delta;
  switch (strategy) {
    case MwStrategy::fresnel:
      if (m22 == 0.0) throw NumericalFailure("mw_kernel: Fresnel route needs M22 != 0");
      return KernelOperator(grid, fresnel_kernel(D, grid));
    case MwStrategy::delta:
      return KernelOperator(grid, delta_kernel(D, grid));
    case MwStrategy::damped:
      return KernelOperator(grid, damped_kernel(D, grid, opts.damping));
    case MwStrategy::automatic:
      break;
  }
  throw NumericalFailure("mw_kernel: unknown strategy");
}

GridFunction mw_apply_grid(const MWDescriptor& D, const GridFunction& f, const MwKernelOptions& opts) {
  return mw_kernel(D, f.grid(), opts).apply(f);
}

namespace {

// g as a function of the first of three variables (x, x₀, p₀).
QuadraticExponent lift3(const GaussianState& g) {
  Mat T(1, 3);
  T << 1.0, 0.0, 0.0;
  return g.exponent().substitute(T);
}

Vec row3(double a, double b) {
  Vec v(3);
  v << 0.0, a, b;
  return v;
}

GaussianState finish(QuadraticExponent e, Complex log_prefactor) {
  e.add_constant(log_prefactor);
  return GaussianState::from_exponent(e.integrate_trailing(1));
}

Complex log_i_power(IndexMod4 nu) { return I1 * (0.5 * kPi * nu.value()); }

}  // namespace

GaussianState mw_apply_gaussian(const MWDescriptor& D, const GaussianState& g) {
  require_n1(D.S().n(), "mw_apply_gaussian");
  QuadraticExponent e = apply_translation(lift3(g), row3(1.0, 0.0), row3(0.0, 1.0));
  CMat dA = CMat::Zero(3, 3);
  dA.bottomRightCorner(2, 2) = -I1 * D.M().matrix().cast<Complex>();
  e.add_quadratic(dA);
  const Complex logpref = -std::log(2.0 * kPi) + log_i_power(D.nu()) - 0.5 * std::log(std::abs(D.det_s_minus_i()));
  return finish(std::move(e), logpref);
}

GaussianState mw_apply_gaussian_sigma_form(const MWDescriptor& D, const GaussianState& g) {
  require_n1(D.S().n(), "mw_apply_gaussian_sigma_form");
  const Mat& S = D.S().matrix();
  const Mat SmI = S - Mat::Identity(2, 2);
  QuadraticExponent e = apply_translation(lift3(g), row3(SmI(0, 0), SmI(0, 1)), row3(SmI(1, 0), SmI(1, 1)));
  // −(i/2)σ(Sz, z) = −(i/2) zᵀ sym(JS) z
  const Mat JS = standard_J(1).matrix() * S;
  CMat dA = CMat::Zero(3, 3);
  dA.bottomRightCorner(2, 2) = I1 * sym_part(JS).cast<Complex>();
  e.add_quadratic(dA);
  const Complex logpref = -std::log(2.0 * kPi) + log_i_power(D.nu()) + 0.5 * std::log(std::abs(D.det_s_minus_i()));
  return finish(std::move(e), logpref);
}

GaussianState mw_apply_gaussian_product_form(const MWDescriptor& D, const GaussianState& g) {
  require_n1(D.S().n(), "mw_apply_gaussian_product_form");
  const Mat& S = D.S().matrix();
  QuadraticExponent e = apply_translation(lift3(g), row3(-1.0, 0.0), row3(0.0, -1.0));
  e = apply_translation(e, row3(S(0, 0), S(0, 1)), row3(S(1, 0), S(1, 1)));
  const Complex logpref = -std::log(2.0 * kPi) + log_i_power(D.nu()) + 0.5 * std::log(std::abs(D.det_s_minus_i()));
  return finish(std::move(e), logpref);
}

AltFormsResidual alt_forms_residual(const MWDescriptor& D, const GaussianState& g) {
  const GaussianState base = mw_apply_gaussian(D, g);
  const double ng = g.norm();
  return {l2_distance(mw_apply_gaussian_sigma_form(D, g), base) / ng,
          l2_distance(mw_apply_gaussian_product_form(D, g), base) / ng};
}

double covariance_residual(const Applier& apply_S, const SymplecticMatrix& S, PhasePoint z, const GridFunction& f) {
  require_n1(S.n(), "covariance_residual");
  const Mat& m = S.matrix();
  const PhasePoint Sz{m(0, 0) * z.x + m(0, 1) * z.p, m(1, 0) * z.x + m(1, 1) * z.p};
  const GridFunction lhs = apply_S(hw_apply(z, f));
  const GridFunction rhs = hw_apply(Sz, apply_S(f));
  return lhs.distance(rhs) / f.norm();
}

}  // namespace metasymp
