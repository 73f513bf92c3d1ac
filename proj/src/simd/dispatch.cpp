#include <atomic>

#include "metasymp/simd/kernels.hpp"

namespace metasymp::simd {

namespace {

Isa initial_isa() {
  return avx2::available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() { return initial_isa(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  return active_isa() == Isa::avx2 ? avx2::dotu(a, b) : scalar::dotu(a, b);
}

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  return active_isa() == Isa::avx2 ? avx2::dotc(a, b) : scalar::dotc(a, b);
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  if (active_isa() == Isa::avx2)
    avx2::axpy(alpha, x, y);
  else
    scalar::axpy(alpha, x, y);
}

void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out) {
  if (active_isa() == Isa::avx2)
    avx2::cmul(a, b, out);
  else
    scalar::cmul(a, b, out);
}

double norm2(std::span<const Complex> a) {
  return active_isa() == Isa::avx2 ? avx2::norm2(a) : scalar::norm2(a);
}

}  // namespace metasymp::simd
