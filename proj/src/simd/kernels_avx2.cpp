// Compiled with -mavx2 -mfma. Only reached after a cpuid check.
//
// A __m256d holds two complex numbers as (re0, im0, re1, im1).

#include <cassert>

#include "metasymp/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define METASYMP_HAVE_AVX2 1
#endif

namespace metasymp::simd::avx2 {

#ifdef METASYMP_HAVE_AVX2

namespace {

inline const double* raw(std::span<const Complex> s) { return reinterpret_cast<const double*>(s.data()); }
inline double* raw(std::span<Complex> s) { return reinterpret_cast<double*>(s.data()); }

// (a·b) for two packed complex pairs.
inline __m256d mul_pairs(__m256d a, __m256d b) {
  __m256d are = _mm256_movedup_pd(a);        // re re
  __m256d aim = _mm256_permute_pd(a, 0xF);   // im im
  __m256d bsw = _mm256_permute_pd(b, 0x5);   // swap re/im of b
  return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

inline Complex hsum_pairs(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

}  // namespace

bool available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

// Σ a b: accumulate re·b and im·swap(b) separately, combine once at the end.
Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const double* pa = raw(a);
  const double* pb = raw(b);
  __m256d acc_r0 = _mm256_setzero_pd(), acc_i0 = _mm256_setzero_pd();
  __m256d acc_r1 = _mm256_setzero_pd(), acc_i1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d va0 = _mm256_loadu_pd(pa + 2 * k), vb0 = _mm256_loadu_pd(pb + 2 * k);
    __m256d va1 = _mm256_loadu_pd(pa + 2 * k + 4), vb1 = _mm256_loadu_pd(pb + 2 * k + 4);
    acc_r0 = _mm256_fmadd_pd(_mm256_movedup_pd(va0), vb0, acc_r0);
    acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(va0, 0xF), _mm256_permute_pd(vb0, 0x5), acc_i0);
    acc_r1 = _mm256_fmadd_pd(_mm256_movedup_pd(va1), vb1, acc_r1);
    acc_i1 = _mm256_fmadd_pd(_mm256_permute_pd(va1, 0xF), _mm256_permute_pd(vb1, 0x5), acc_i1);
  }
  for (; k + 2 <= n; k += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * k), vb = _mm256_loadu_pd(pb + 2 * k);
    acc_r0 = _mm256_fmadd_pd(_mm256_movedup_pd(va), vb, acc_r0);
    acc_i0 = _mm256_fmadd_pd(_mm256_permute_pd(va, 0xF), _mm256_permute_pd(vb, 0x5), acc_i0);
  }
  // acc_r = (ar br, ar bi), acc_i = (ai bi, ai br): re = r0 − i0, im = r1 + i1
  __m256d r = _mm256_add_pd(acc_r0, acc_r1);
  __m256d i = _mm256_add_pd(acc_i0, acc_i1);
  __m256d v = _mm256_addsub_pd(r, i);
  Complex s = hsum_pairs(v);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const double* pa = raw(a);
  const double* pb = raw(b);
  __m256d acc_r = _mm256_setzero_pd(), acc_i = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d va = _mm256_loadu_pd(pa + 2 * k), vb = _mm256_loadu_pd(pb + 2 * k);
    acc_r = _mm256_fmadd_pd(_mm256_movedup_pd(va), vb, acc_r);
    acc_i = _mm256_fmadd_pd(_mm256_permute_pd(va, 0xF), _mm256_permute_pd(vb, 0x5), acc_i);
  }
  // conj(a) b: re = ar br + ai bi, im = ar bi − ai br
  __m256d flipped = _mm256_mul_pd(acc_i, _mm256_set_pd(-1.0, 1.0, -1.0, 1.0));
  Complex s = hsum_pairs(_mm256_add_pd(acc_r, flipped));
  for (; k < n; ++k) s += std::conj(a[k]) * b[k];
  return s;
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const double* px = raw(x);
  double* py = raw(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d vx = _mm256_loadu_pd(px + 2 * k);
    __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, _mm256_permute_pd(vx, 0x5)));
    _mm256_storeu_pd(py + 2 * k, _mm256_add_pd(_mm256_loadu_pd(py + 2 * k), prod));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  assert(a.size() == b.size() && a.size() == out.size());
  const std::size_t n = a.size();
  const double* pa = raw(a);
  const double* pb = raw(b);
  double* po = raw(out);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2)
    _mm256_storeu_pd(po + 2 * k, mul_pairs(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k)));
  for (; k < n; ++k) out[k] = a[k] * b[k];
}

double norm2(std::span<const Complex> a) {
  const std::size_t n = a.size();
  const double* pa = raw(a);
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d v0 = _mm256_loadu_pd(pa + 2 * k), v1 = _mm256_loadu_pd(pa + 2 * k + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; k + 2 <= n; k += 2) {
    __m256d v = _mm256_loadu_pd(pa + 2 * k);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  Complex s = hsum_pairs(_mm256_add_pd(acc0, acc1));
  double total = s.real() + s.imag();
  for (; k < n; ++k) total += std::norm(a[k]);
  return total;
}

#else  // no AVX2 in this build: never selected

bool available() { return false; }
Complex dotu(std::span<const Complex> a, std::span<const Complex> b) { return scalar::dotu(a, b); }
Complex dotc(std::span<const Complex> a, std::span<const Complex> b) { return scalar::dotc(a, b); }
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) { scalar::axpy(alpha, x, y); }
void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  scalar::cmul(a, b, out);
}
double norm2(std::span<const Complex> a) { return scalar::norm2(a); }

#endif

}  // namespace metasymp::simd::avx2
