#pragma once

// Complex inner-loop kernels. Every kernel has a scalar reference in
// metasymp::simd::scalar and (on x86-64) an AVX2/FMA variant in
// metasymp::simd::avx2; the unqualified entry points dispatch at runtime.

#include <complex>
#include <span>
#include <string_view>

namespace metasymp::simd {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best ISA supported by this CPU and build.
Isa detected_isa();

/// ISA currently used by the dispatching entry points.
Isa active_isa();

/// Override the dispatch target. Returns false (and changes nothing) when the
/// requested ISA is unavailable.
bool set_isa(Isa isa);

/// Σ a_k b_k
Complex dotu(std::span<const Complex> a, std::span<const Complex> b);
/// Σ conj(a_k) b_k
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);
/// y += alpha · x
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
/// out_k = a_k b_k (out may alias a or b)
void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
/// Σ |a_k|²
double norm2(std::span<const Complex> a);

namespace scalar {
Complex dotu(std::span<const Complex> a, std::span<const Complex> b);
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
double norm2(std::span<const Complex> a);
}  // namespace scalar

namespace avx2 {
bool available();
Complex dotu(std::span<const Complex> a, std::span<const Complex> b);
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void cmul(std::span<const Complex> a, std::span<const Complex> b, std::span<Complex> out);
double norm2(std::span<const Complex> a);
}  // namespace avx2

}  // namespace metasymp::simd
