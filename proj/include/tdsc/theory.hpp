// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tdsc/pilot_grid.hpp"
#include "tdsc/types.hpp"

#include <vector>

namespace tdsc {

/// Gaussian model of C(v) under both hypotheses.
///
/// sigma_h0_sq is the total complex variance of C(v) under H0 (so that
/// |C|^2 / sigma_h0_sq is a unit exponential). sigma_h1_sq is the per-real-
/// component variance under H1; with signal-cross-noise terms neglected it is
/// sigma_h0_sq / 2. noncentrality = lambda_mean^2 / sigma_h1_sq.
struct HypothesisParams {
  double sigma_h0_sq = 0.0;
  double sigma_h1_sq = 0.0;
  double lambda_mean = 0.0;
  double noncentrality = 0.0;

  void validate() const;
};

HypothesisParams make_hypothesis(double sigma_h0_sq, double lambda_mean);

/// Build params directly from a noncentrality value (lambda_mean derived).
HypothesisParams hypothesis_from_noncentrality(double sigma_h0_sq, double noncentrality);

/// Lambda = (rho^2 / N^2) (1/A) sum_a sum_{k in P_a} |H[k]|^2
double lambda_mean(const ComplexVector& channel_gains, const PilotPattern& pattern);

/// First-order Marcum Q, Q_1(a, b), as the Poisson mixture of central
/// chi-square tails. Absolute error well below 1e-10.
double marcum_q1(double a, double b);

/// Right tail of the non-central chi-square with two degrees of freedom:
/// Q_{chi'^2_2(lambda)}(x) = Q_1(sqrt(lambda), sqrt(x)).
double ncx2_2_rtail(double noncentrality, double x);

/// P_MD = 1 - Q_{chi'^2_2(lambda)}(gamma^2 / sigma_h1^2)
double pmd_analytic(double gamma, const HypothesisParams& params);

struct OperatingPoint {
  double p_fa = 0.0;
  double p_d = 0.0;
};

std::vector<OperatingPoint> roc_analytic(const HypothesisParams& params, const std::vector<double>& pfa_grid);

}  // namespace tdsc
