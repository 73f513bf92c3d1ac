#include "metasymp/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "metasymp/errors.hpp"

namespace metasymp {

QuadraticExponent::QuadraticExponent(int vars) : A_(CMat::Zero(vars, vars)), b_(CVec::Zero(vars)), c_(0.0) {}

QuadraticExponent::QuadraticExponent(CMat A, CVec b, Complex c) : A_(std::move(A)), b_(std::move(b)), c_(c) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size()) throw DimensionError("quadratic exponent: size mismatch");
  A_ = 0.5 * (A_ + A_.transpose()).eval();
}

QuadraticExponent QuadraticExponent::substitute(const Mat& T) const {
  if (T.rows() != vars()) throw DimensionError("substitute: T must have one row per variable");
  const CMat Tc = T.cast<Complex>();
  return QuadraticExponent(Tc.transpose() * A_ * Tc, Tc.transpose() * b_, c_);
}

QuadraticExponent& QuadraticExponent::add_bilinear(Complex beta, const Vec& u, const Vec& w) {
  const CMat uw = (u * w.transpose()).cast<Complex>();
  A_ -= beta * (uw + uw.transpose());
  return *this;
}

QuadraticExponent& QuadraticExponent::add_quadratic(const CMat& dA) {
  A_ += 0.5 * (dA + dA.transpose());
  return *this;
}

QuadraticExponent& QuadraticExponent::add_linear(const CVec& db) {
  b_ += db;
  return *this;
}

QuadraticExponent& QuadraticExponent::add_constant(Complex dc) {
  c_ += dc;
  return *this;
}

QuadraticExponent QuadraticExponent::operator+(const QuadraticExponent& o) const {
  if (o.vars() != vars()) throw DimensionError("product of exponentials on different variables");
  return QuadraticExponent(A_ + o.A_, b_ + o.b_, c_ + o.c_);
}

QuadraticExponent QuadraticExponent::integrate_out(int index) const {
  const int k = vars();
  if (index < 0 || index >= k) throw DimensionError("integrate_out: no such variable");
  const Complex a = A_(index, index);
  const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff());
  if (std::abs(a) < 1e-12 * scale) throw NumericalFailure("integrate_out: vanishing quadratic coefficient");
  if (a.real() < -1e-12 * scale) throw NumericalFailure("integrate_out: divergent Gaussian (Re a < 0)");

  std::vector<int> rest;
  for (int i = 0; i < k; ++i)
    if (i != index) rest.push_back(i);
  const int m = k - 1;
  CMat A2(m, m);
  CVec b2(m);
  CVec r(m);
  for (int i = 0; i < m; ++i) {
    r(i) = A_(rest[i], index);
    b2(i) = b_(rest[i]);
    for (int j = 0; j < m; ++j) A2(i, j) = A_(rest[i], rest[j]);
  }
  const Complex beta = b_(index);
  A2 -= r * r.transpose() / a;
  b2 -= beta * r / a;
  const Complex c2 = c_ + beta * beta / (2.0 * a) + 0.5 * std::log(2.0 * kPi) - 0.5 * std::log(a);
  return QuadraticExponent(A2, b2, c2);
}

QuadraticExponent QuadraticExponent::integrate_trailing(int first) const {
  QuadraticExponent e = *this;
  while (e.vars() > first) {
    int best = first;
    for (int i = first + 1; i < e.vars(); ++i)
      if (e.A_(i, i).real() > e.A_(best, best).real()) best = i;
    e = e.integrate_out(best);
  }
  return e;
}

Complex QuadraticExponent::log_value(const Vec& v) const {
  if (v.size() != vars()) throw DimensionError("log_value: wrong number of variables");
  const CVec vc = v.cast<Complex>();
  return -0.5 * (vc.transpose() * A_ * vc)(0, 0) + (b_.transpose() * vc)(0, 0) + c_;
}

QuadraticExponent apply_translation(const QuadraticExponent& e, const Vec& Wx, const Vec& Wp) {
  const int k = e.vars();
  if (Wx.size() != k || Wp.size() != k) throw DimensionError("apply_translation: size mismatch");
  if (Wx(0) != 0.0 || Wp(0) != 0.0) throw DimensionError("apply_translation: translation may not depend on x");
  Mat T = Mat::Identity(k, k);
  T.row(0) -= Wx.transpose();
  QuadraticExponent out = e.substitute(T);
  Vec e0 = Vec::Zero(k);
  e0(0) = 1.0;
  out.add_bilinear(Complex(0.0, 1.0), Wp, e0);
  out.add_bilinear(Complex(0.0, -0.5), Wp, Wx);
  return out;
}

GaussianState GaussianState::standard(double x0, double p0) {
  GaussianState g;
  g.x0 = x0;
  g.p0 = p0;
  g.width = 1.0;
  g.log_amplitude = -0.25 * std::log(kPi);
  return g;
}

GaussianState GaussianState::from_exponent(const QuadraticExponent& e) {
  if (e.vars() != 1) throw DimensionError("Gaussian state needs a one-variable exponent");
  const Complex alpha = e.A()(0, 0);
  const Complex beta = e.b()(0);
  if (!(alpha.real() > 0.0)) throw NumericalFailure("exponent is not normalisable (Re w <= 0)");
  GaussianState g;
  g.width = alpha;
  g.x0 = beta.real() / alpha.real();
  g.p0 = beta.imag() - alpha.imag() * g.x0;
  g.log_amplitude = e.c() + 0.5 * alpha * g.x0 * g.x0 + Complex(0.0, g.p0 * g.x0);
  return g;
}

QuadraticExponent GaussianState::exponent() const {
  CMat A(1, 1);
  A(0, 0) = width;
  CVec b(1);
  b(0) = width * x0 + Complex(0.0, p0);
  return QuadraticExponent(A, b, log_amplitude - 0.5 * width * x0 * x0 - Complex(0.0, p0 * x0));
}

Complex GaussianState::operator()(double x) const {
  const double d = x - x0;
  return std::exp(log_amplitude - 0.5 * width * d * d + Complex(0.0, p0 * d));
}

double GaussianState::norm() const { return std::exp(log_amplitude.real()) * std::pow(kPi / width.real(), 0.25); }

GridFunction GaussianState::sample(const GridSpec& grid) const {
  return GridFunction::sample(grid, [this](double x) { return (*this)(x); });
}

GaussianState GaussianState::scaled(Complex factor) const {
  GaussianState g = *this;
  g.log_amplitude += std::log(factor);
  return g;
}

double l2_distance(const GaussianState& g, const GaussianState& h) {
  const double sg = 1.0 / std::sqrt(g.width.real());
  const double sh = 1.0 / std::sqrt(h.width.real());
  const double lo = std::min(g.x0 - 12.0 * sg, h.x0 - 12.0 * sh);
  const double hi = std::max(g.x0 + 12.0 * sg, h.x0 + 12.0 * sh);
  const double L = hi - lo;
  auto freq = [L](const GaussianState& s) {
    return std::abs(s.p0) + std::abs(s.width.imag()) * L + 8.0 * std::sqrt(s.width.real());
  };
  const double kmax = std::max(freq(g), freq(h));
  const double step = std::min({0.2 * std::min(sg, sh), kPi / (2.0 * kmax)});
  const auto count = static_cast<std::size_t>(std::min(4e6, std::ceil(L / step))) + 1;
  const double dx = L / static_cast<double>(count - 1);
  double s = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double x = lo + static_cast<double>(j) * dx;
    s += std::norm(g(x) - h(x));
  }
  return std::sqrt(s * dx);
}

}  // namespace metasymp
