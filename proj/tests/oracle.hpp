// SPDX-License-Identifier: Apache-2.0

#pragma once

// Independent references for the detection-theory code: Marcum Q by direct
// quadrature of the Rice density instead of the series used in the library.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace oracle {

// I0(z) e^{-z}
inline double scaled_i0(double z) {
  if (z < 600.0) return std::cyl_bessel_i(0.0, z) * std::exp(-z);
  const double t = 1.0 / (8.0 * z);
  return (1.0 + t + 4.5 * t * t + 37.5 * t * t * t) / std::sqrt(2.0 * 3.14159265358979323846 * z);
}

// Rice density with unit per-component variance, x e^{-(x^2 + a^2)/2} I0(a x).
inline double rice_pdf(double a, double x) {
  return x * std::exp(-0.5 * (x - a) * (x - a)) * scaled_i0(a * x);
}

// Fixed 61-point Gauss-Kronrod rule on panels of width <= 0.5; the density
// varies on a unit scale, so each panel is resolved to rounding error.
inline double integrate(double a, double lo, double hi) {
  if (hi <= lo) return 0.0;
  auto f = [a](double x) { return rice_pdf(a, x); };
  const int panels = static_cast<int>(std::ceil((hi - lo) / 0.5));
  const double w = (hi - lo) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i)
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo + i * w, lo + (i + 1) * w, 0);
  return sum;
}

// Q_1(a, b), integrating whichever side of the density is smaller.
inline double marcum_q1(double a, double b) {
  const double hi = a + 40.0;
  if (b >= a) return integrate(a, b, std::max(b, hi));
  return 1.0 - integrate(a, 0.0, b);
}

}  // namespace oracle
