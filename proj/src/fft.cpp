// SPDX-License-Identifier: Apache-2.0

#include "tdsc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <new>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace tdsc::dsp {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n_fft, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n_fft, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // Plans are always executed on fftw_malloc'd scratch (see Scratch), so the
    // alignment assumed here holds and the codelet choice is fixed.
    auto* scratch_in = fftw_alloc_complex(n_fft);
    auto* scratch_out = fftw_alloc_complex(n_fft);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n_fft), scratch_in, scratch_out, sign,
                                      FFTW_ESTIMATE);
    fftw_free(scratch_in);
    fftw_free(scratch_out);
    if (plan == nullptr) throw std::runtime_error("fftw: failed to create plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

// Per-thread SIMD-aligned buffers; copying through them is cheaper than
// running unaligned codelets.
class Scratch {
 public:
  ~Scratch() { release(); }
  void reserve(std::size_t n) {
    if (n <= size_) return;
    release();
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    if (in_ == nullptr || out_ == nullptr) throw std::bad_alloc();
    size_ = n;
  }
  fftw_complex* in() { return in_; }
  fftw_complex* out() { return out_; }

 private:
  void release() {
    fftw_free(in_);
    fftw_free(out_);
    in_ = out_ = nullptr;
    size_ = 0;
  }
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  std::size_t size_ = 0;
};

void execute(const Complex* in, Complex* out, std::size_t n_fft, int sign) {
  if (n_fft == 0) return;
  fftw_plan plan = cache().get(n_fft, sign);
  thread_local Scratch scratch;
  scratch.reserve(n_fft);
  std::memcpy(scratch.in(), in, n_fft * sizeof(Complex));
  fftw_execute_dft(plan, scratch.in(), scratch.out());
  std::memcpy(static_cast<void*>(out), scratch.out(), n_fft * sizeof(Complex));
}

}  // namespace

void fft_forward(const Complex* in, Complex* out, std::size_t n_fft) {
  execute(in, out, n_fft, FFTW_FORWARD);
}

void fft_backward(const Complex* in, Complex* out, std::size_t n_fft) {
  execute(in, out, n_fft, FFTW_BACKWARD);
}

}  // namespace tdsc::dsp
