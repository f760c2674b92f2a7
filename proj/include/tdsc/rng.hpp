// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/types.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <initializer_list>
#include <random>

namespace tdsc {

using Engine = boost::random::mt19937_64;

/// Mixes a list of 64-bit words into one seed. Distinct lists give
/// independent streams; the mapping is fixed by std::seed_seq.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * parts.size());
  for (std::uint64_t p : parts) {
    words.push_back(static_cast<std::uint32_t>(p));
    words.push_back(static_cast<std::uint32_t>(p >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

// Sub-stream tags used inside one trial.
enum class Stream : std::uint64_t { Payload = 1, Fading = 2, Phase = 3, Noise = 4 };

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream) {
  return derive_seed({seed, static_cast<std::uint64_t>(stream)});
}

/// Adds circularly-symmetric complex Gaussian noise of total power `power`
/// to x[begin, end).
inline void add_complex_gaussian(ComplexVector& x, Eigen::Index begin, Eigen::Index end,
                                 double power, Engine& engine) {
  boost::random::normal_distribution<double> normal(0.0, std::sqrt(power / 2.0));
  for (Eigen::Index n = begin; n < end; ++n) {
    const double re = normal(engine);
    const double im = normal(engine);
    x(n) += Complex(re, im);
  }
}

}  // namespace tdsc
