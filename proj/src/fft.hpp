#pragma once

#include <vector>

#include "metasymp/linalg.hpp"

namespace metasymp::detail {

/// In-place unnormalised DFT (forward: e^{−2πijk/N}). Plans are cached per
/// (N, direction); execution is thread-safe.
void fft(std::vector<Complex>& v, bool inverse);

/// Angular frequency of DFT bin k on a grid of spacing dx; the Nyquist bin maps to 0.
double fft_frequency(std::size_t k, std::size_t N, double dx);

}  // namespace metasymp::detail
