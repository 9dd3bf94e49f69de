#include "fft_internal.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace scatterkit::detail {
namespace {

// fftw_malloc-backed scratch buffer so cached plans (created on aligned
// memory) can be re-executed on fresh arrays via the new-array interface.
struct FftwBuffer {
  fftw_complex* ptr = nullptr;
  explicit FftwBuffer(std::size_t n) {
    ptr = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

class PlanCache {
public:
  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(h, w, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    FftwBuffer in(h * w), out(h * w);
    fftw_plan plan;
    if (h == 1) {
      plan = fftw_plan_dft_1d(static_cast<int>(w), in.ptr, out.ptr, sign,
                              FFTW_ESTIMATE);
    } else {
      plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), in.ptr,
                              out.ptr, sign, FFTW_ESTIMATE);
    }
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_c2c(std::size_t height, std::size_t width, int sign,
             const std::complex<double>* in, std::complex<double>* out) {
  const std::size_t n = height * width;
  fftw_plan plan = cache().get(height, width, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);

  FftwBuffer src(n), dst(n);
  std::copy_n(reinterpret_cast<const double*>(in), 2 * n, &src.ptr[0][0]);
  fftw_execute_dft(plan, src.ptr, dst.ptr);
  std::copy_n(&dst.ptr[0][0], 2 * n, reinterpret_cast<double*>(out));
}

}  // namespace scatterkit::detail
