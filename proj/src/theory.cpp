// SPDX-License-Identifier: Apache-2.0

#include "tdsc/theory.hpp"

#include "tdsc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdsc {

void HypothesisParams::validate() const {
  if (!(sigma_h0_sq >= 0.0) || !(sigma_h1_sq >= 0.0) || !(lambda_mean >= 0.0) || !(noncentrality >= 0.0))
    throw std::invalid_argument("hypothesis params must be non-negative");
}

HypothesisParams make_hypothesis(double sigma_h0_sq, double lambda_mean) {
  HypothesisParams p;
  p.sigma_h0_sq = sigma_h0_sq;
  p.sigma_h1_sq = sigma_h0_sq / 2.0;
  p.lambda_mean = lambda_mean;
  p.noncentrality = p.sigma_h1_sq > 0.0 ? lambda_mean * lambda_mean / p.sigma_h1_sq : 0.0;
  p.validate();
  return p;
}

HypothesisParams hypothesis_from_noncentrality(double sigma_h0_sq, double noncentrality) {
  if (!(noncentrality >= 0.0)) throw std::invalid_argument("noncentrality must be non-negative");
  HypothesisParams p;
  p.sigma_h0_sq = sigma_h0_sq;
  p.sigma_h1_sq = sigma_h0_sq / 2.0;
  p.noncentrality = noncentrality;
  p.lambda_mean = std::sqrt(noncentrality * p.sigma_h1_sq);
  p.validate();
  return p;
}

double lambda_mean(const ComplexVector& channel_gains, const PilotPattern& pattern) {
  if (static_cast<std::size_t>(channel_gains.size()) != pattern.num_subcarriers())
    throw std::invalid_argument("lambda_mean: need one channel gain per subcarrier");
  double sum = 0.0;
  for (const auto& set : pattern.configs())
    for (std::size_t k : set) sum += std::norm(channel_gains(static_cast<Eigen::Index>(k)));
  const double n = static_cast<double>(pattern.num_subcarriers());
  const double rho = pattern.pilot_amplitude();
  return rho * rho / (n * n) * sum / static_cast<double>(pattern.period());
}

namespace {

double poisson_log_pmf(double mean, double j) {
  return -mean + j * std::log(mean) - std::lgamma(j + 1.0);
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("marcum_q1: arguments must be non-negative");
  if (b == 0.0) return 1.0;
  const double h = a * a / 2.0;  // Poisson mean of the mixing index
  const double y = b * b / 2.0;
  if (h == 0.0) return std::exp(-y);

  // Q_1(a, b) = sum_j Pois(j; h) * P[Pois(y) <= j]. Weights are summed outward
  // from the mode; tail_cdf(j) is the Poisson(y) CDF.
  auto poisson_cdf = [y](std::size_t j) {
    double term = std::exp(-y);
    if (term == 0.0) {
      // Large y: sum in log space from the top term downwards.
      double total = 0.0;
      for (std::size_t i = j + 1; i-- > 0;) {
        const double t = std::exp(poisson_log_pmf(y, static_cast<double>(i)));
        total += t;
        if (static_cast<double>(i) < y && t < 1e-17 * total) break;
      }
      return std::min(total, 1.0);
    }
    double total = term;
    for (std::size_t i = 1; i <= j; ++i) {
      term *= y / static_cast<double>(i);
      total += term;
    }
    return std::min(total, 1.0);
  };

  const auto mode = static_cast<std::size_t>(std::floor(h));
  double sum = 0.0;
  // Upward from the mode.
  {
    double cdf = poisson_cdf(mode);
    double weight = std::exp(poisson_log_pmf(h, static_cast<double>(mode)));
    for (std::size_t j = mode;; ++j) {
      if (j > mode) {
        weight *= h / static_cast<double>(j);
        cdf = std::min(cdf + std::exp(poisson_log_pmf(y, static_cast<double>(j))), 1.0);
      }
      const double contribution = weight * cdf;
      sum += contribution;
      // cdf <= 1, so the remaining terms sum to less than the current weight.
      if (static_cast<double>(j) > h && (weight < 1e-17 * sum || weight < 1e-300)) break;
      if (j > mode + 100000) break;
    }
  }
  // Downward from the mode.
  {
    double cdf = poisson_cdf(mode);
    double weight = std::exp(poisson_log_pmf(h, static_cast<double>(mode)));
    for (std::size_t j = mode; j-- > 0;) {
      weight *= static_cast<double>(j + 1) / h;
      cdf -= std::exp(poisson_log_pmf(y, static_cast<double>(j + 1)));
      cdf = std::max(cdf, 0.0);
      const double contribution = weight * cdf;
      sum += contribution;
      if (contribution < 1e-17 * sum || weight < 1e-300) break;
    }
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ncx2_2_rtail(double noncentrality, double x) {
  if (!(noncentrality >= 0.0) || !(x >= 0.0))
    throw std::invalid_argument("ncx2_2_rtail: arguments must be non-negative");
  return marcum_q1(std::sqrt(noncentrality), std::sqrt(x));
}

double pmd_analytic(double gamma, const HypothesisParams& params) {
  params.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("pmd_analytic: negative threshold");
  if (gamma == 0.0) return 0.0;
  if (params.sigma_h1_sq == 0.0)
    throw std::invalid_argument("pmd_analytic: zero H1 variance with a positive threshold");
  return std::clamp(1.0 - ncx2_2_rtail(params.noncentrality, gamma * gamma / params.sigma_h1_sq), 0.0, 1.0);
}

std::vector<OperatingPoint> roc_analytic(const HypothesisParams& params, const std::vector<double>& pfa_grid) {
  std::vector<OperatingPoint> out;
  out.reserve(pfa_grid.size());
  for (double p : pfa_grid) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("roc_analytic: grid values must lie in (0, 1]");
    const double gamma = threshold(params.sigma_h0_sq, p);
    out.push_back({p, 1.0 - pmd_analytic(gamma, params)});
  }
  return out;
}

}  // namespace tdsc
