#include <doctest.h>

#include <random>
#include <vector>

#include "metasymp/simd/kernels.hpp"

namespace simd = metasymp::simd;
using simd::Complex;

namespace {

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (Complex& c : v) c = {u(rng), u(rng)};
  return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Restores the dispatch target on scope exit.
struct IsaGuard {
  simd::Isa saved = simd::active_isa();
  ~IsaGuard() { simd::set_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("dispatch") {
  IsaGuard guard;
  CHECK(simd::set_isa(simd::Isa::scalar));
  CHECK(simd::active_isa() == simd::Isa::scalar);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
  if (simd::avx2::available()) {
    CHECK(simd::detected_isa() == simd::Isa::avx2);
    CHECK(simd::set_isa(simd::Isa::avx2));
    CHECK(simd::active_isa() == simd::Isa::avx2);
  } else {
    CHECK_FALSE(simd::set_isa(simd::Isa::avx2));
    CHECK(simd::active_isa() == simd::Isa::scalar);
  }
}

TEST_CASE("scalar kernels") {
  const std::vector<Complex> a = {{1, 2}, {3, -1}}, b = {{0, 1}, {2, 2}};
  // (1+2i)i + (3−i)(2+2i) = (−2+i) + (8+4i)
  CHECK(simd::scalar::dotu(a, b) == Complex(6, 5));
  // (1−2i)i + (3+i)(2+2i) = (2+i) + (4+8i)
  CHECK(simd::scalar::dotc(a, b) == Complex(6, 9));
  CHECK(simd::scalar::norm2(a) == 15.0);
  std::vector<Complex> y = b;
  simd::scalar::axpy({0, 1}, a, y);
  CHECK(y[0] == Complex(-2, 2));
  CHECK(y[1] == Complex(3, 5));
  std::vector<Complex> out(2);
  simd::scalar::cmul(a, b, out);
  CHECK(out[0] == Complex(-2, 1));
  CHECK(out[1] == Complex(8, 4));
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  if (!simd::avx2::available()) {
    MESSAGE("AVX2 not available on this CPU; only the scalar path is exercised");
    return;
  }
  for (std::size_t n = 0; n <= 37; ++n) {
    CAPTURE(n);
    const auto a = random_vector(n, 2 * n + 1), b = random_vector(n, 2 * n + 2);
    const double scale = 1e-14 * static_cast<double>(n + 1);
    CHECK(std::abs(simd::avx2::dotu(a, b) - simd::scalar::dotu(a, b)) <= scale);
    CHECK(std::abs(simd::avx2::dotc(a, b) - simd::scalar::dotc(a, b)) <= scale);
    CHECK(std::abs(simd::avx2::norm2(a) - simd::scalar::norm2(a)) <= scale);

    std::vector<Complex> y1 = b, y2 = b;
    simd::avx2::axpy({0.3, -0.7}, a, y1);
    simd::scalar::axpy({0.3, -0.7}, a, y2);
    CHECK(max_diff(y1, y2) <= 1e-15);

    std::vector<Complex> o1(n), o2(n);
    simd::avx2::cmul(a, b, o1);
    simd::scalar::cmul(a, b, o2);
    CHECK(max_diff(o1, o2) <= 1e-15);
  }
}

TEST_CASE("cmul may write over its input") {
  const auto a = random_vector(13, 5), b = random_vector(13, 6);
  std::vector<Complex> expected(13);
  simd::scalar::cmul(a, b, expected);
  std::vector<Complex> in_a = a, in_b = b;
  simd::cmul(in_a, b, in_a);
  simd::cmul(a, in_b, in_b);
  CHECK(max_diff(in_a, expected) <= 1e-15);
  CHECK(max_diff(in_b, expected) <= 1e-15);
  if (simd::avx2::available()) {
    std::vector<Complex> w = a;
    simd::avx2::cmul(w, b, w);
    CHECK(max_diff(w, expected) <= 1e-15);
  }
}

TEST_CASE("dispatching entry points follow the active ISA") {
  IsaGuard guard;
  const auto a = random_vector(29, 7), b = random_vector(29, 8);
  simd::set_isa(simd::Isa::scalar);
  const Complex s = simd::dotc(a, b);
  CHECK(s == simd::scalar::dotc(a, b));
  if (simd::set_isa(simd::Isa::avx2)) {
    const Complex v = simd::dotc(a, b);
    CHECK(v == simd::avx2::dotc(a, b));
    CHECK(std::abs(v - s) < 1e-13);
  }
}

}  // TEST_SUITE
