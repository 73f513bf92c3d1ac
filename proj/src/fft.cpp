#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace metasymp::detail {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t N, bool inverse) {
    std::lock_guard lock(mutex_);
    auto key = std::pair{N, inverse};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    // Planning needs scratch arrays; FFTW_UNALIGNED lets the plan run on any buffer.
    std::vector<Complex> scratch(N);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(N), p, p, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft(std::vector<Complex>& v, bool inverse) {
  fftw_plan plan = cache().get(v.size(), inverse);
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_execute_dft(plan, p, p);
}

double fft_frequency(std::size_t k, std::size_t N, double dx) {
  if (2 * k == N) return 0.0;
  const double signed_k = (2 * k < N) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(N);
  return 2.0 * kPi * signed_k / (static_cast<double>(N) * dx);
}

}  // namespace metasymp::detail
