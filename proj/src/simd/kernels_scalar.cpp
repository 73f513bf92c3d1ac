#include <cassert>

#include "metasymp/simd/kernels.hpp"

namespace metasymp::simd::scalar {

Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
  }
  return {re, im};
}

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return {re, im};
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  assert(x.size() == y.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
}

double norm2(std::span<const Complex> a) {
  double s = 0.0;
  for (const Complex& z : a) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

}  // namespace metasymp::simd::scalar
