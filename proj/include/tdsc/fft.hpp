// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"

namespace tdsc::dsp {

// Unnormalized DFT pair over contiguous complex buffers.
//   forward:  X[k] = sum_n x[n] e^{-j2pi kn/n_fft}
//   backward: x[n] = sum_k X[k] e^{+j2pi kn/n_fft}
// Plans are cached per size and shared by all threads; execution is reentrant.
// Results do not depend on buffer alignment.
void fft_forward(const Complex* in, Complex* out, std::size_t n_fft);
void fft_backward(const Complex* in, Complex* out, std::size_t n_fft);

template <typename Derived>
ComplexVector fft(const Eigen::DenseBase<Derived>& x) {
  ComplexVector in = x;
  ComplexVector out(in.size());
  fft_forward(in.data(), out.data(), static_cast<std::size_t>(in.size()));
  return out;
}

/// Inverse transform including the 1/n_fft factor.
template <typename Derived>
ComplexVector ifft(const Eigen::DenseBase<Derived>& x) {
  ComplexVector in = x;
  ComplexVector out(in.size());
  fft_backward(in.data(), out.data(), static_cast<std::size_t>(in.size()));
  out /= static_cast<double>(in.size());
  return out;
}

}  // namespace tdsc::dsp
