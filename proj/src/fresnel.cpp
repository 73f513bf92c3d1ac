#include "metasymp/fresnel.hpp"

#include <cmath>
#include <sstream>

#include "metasymp/errors.hpp"
#include "metasymp/index.hpp"
#include "metasymp/weyl.hpp"

namespace metasymp {

namespace {

void require_symmetric(const Mat& M, const Vec& v) {
  if (M.rows() != M.cols() || M.rows() != v.size() || M.rows() == 0)
    throw DimensionError("Fresnel integral: M must be square and match v");
  if (max_abs(M - M.transpose()) > tol::symplectic * std::max(1.0, max_abs(M)))
    throw SymmetryError("Fresnel integral: M must be symmetric");
}

// (2π)^{−1/2} ∫ exp(−i v w + (i/2) λ w² − ε w²) dw by the trapezoid rule.
Complex damped_1d(double lambda, double v, double eps) {
  const double U = std::sqrt(35.0 / eps);
  const double h = 2.0 * kPi / (std::abs(v) + 2.0 * std::abs(lambda) * U + 20.0);
  const auto half = static_cast<long long>(std::ceil(U / h));
  Complex s = 0.0;
  for (long long k = -half; k <= half; ++k) {
    const double w = static_cast<double>(k) * h;
    s += std::exp(Complex(-eps * w * w, 0.5 * lambda * w * w - v * w));
  }
  return s * h / std::sqrt(2.0 * kPi);
}

Complex extrapolate(const std::vector<double>& eps, const std::vector<Complex>& samples) {
  const std::vector<double> w = extrapolation_weights(eps);
  Complex s = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) s += w[i] * samples[i];
  return s;
}

}  // namespace

Complex fresnel_closed(const Mat& M, const Vec& v) {
  require_symmetric(M, v);
  Eigen::PartialPivLU<Mat> lu(M);
  const double d = lu.determinant();
  if (!det_clears(d, M)) throw FresnelDegenerate("Fresnel integral: M is singular");
  const int sgn = inertia(M).signature();
  const double quad = v.dot(lu.solve(v));
  return std::pow(std::abs(d), -0.5) * std::polar(1.0, 0.25 * kPi * sgn - 0.5 * quad);
}

FresnelNumeric fresnel_numeric(const Mat& M, const Vec& v, const std::vector<double>& eps) {
  require_symmetric(M, v);
  if (eps.size() < 2) throw NumericalFailure("fresnel_numeric: need at least two damping values");
  if (!det_clears(M.determinant(), M)) throw FresnelDegenerate("Fresnel integral: M is singular");
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym_part(M));
  const Vec lambda = eig.eigenvalues();
  const Vec vr = eig.eigenvectors().transpose() * v;

  FresnelNumeric out;
  for (double e : eps) {
    Complex prod = 1.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) prod *= damped_1d(lambda(i), vr(i), e);
    out.samples.push_back(prod);
  }
  out.value = extrapolate(eps, out.samples);
  const std::vector<double> fewer(eps.begin() + 1, eps.end());
  const std::vector<Complex> fewer_samples(out.samples.begin() + 1, out.samples.end());
  out.spread = std::abs(out.value - extrapolate(fewer, fewer_samples));
  if (out.spread > 1e-5 * std::max(1.0, std::abs(out.value))) {
    std::ostringstream os;
    os << "fresnel_numeric: extrapolation did not settle (spread " << out.spread << ")";
    throw NumericalFailure(os.str());
  }
  return out;
}

}  // namespace metasymp
