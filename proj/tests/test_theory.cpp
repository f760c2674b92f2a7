// SPDX-License-Identifier: Apache-2.0

#include "oracle.hpp"

#include "tdsc/detector.hpp"
#include "tdsc/theory.hpp"

#include <doctest.h>

#include <cmath>

using namespace tdsc;

TEST_CASE("non-central chi-square tail") {
  CHECK(ncx2_2_rtail(0.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(ncx2_2_rtail(0.0, 0.0) == 1.0);
  CHECK(ncx2_2_rtail(5.0, 0.0) == 1.0);
  CHECK(std::abs(marcum_q1(1.0, 1.0) - oracle::marcum_q1(1.0, 1.0)) < 1e-8);
  CHECK(marcum_q1(1.0, 1.0) == doctest::Approx(0.7328798037).epsilon(1e-9));
  CHECK_THROWS_AS(marcum_q1(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ncx2_2_rtail(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("Marcum Q against quadrature") {
  for (double a : {0.0, 0.3, 1.5, 4.0, 9.0, 20.0})
    for (double b : {0.1, 1.0, 2.5, 6.0, 12.0, 25.0}) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(marcum_q1(a, b) - oracle::marcum_q1(a, b)) < 1e-8);
    }
}

TEST_CASE("Marcum Q deep tail keeps relative accuracy") {
  CHECK(marcum_q1(1.5, 25.0) == doctest::Approx(8.360893551325903e-122).epsilon(1e-6));
  CHECK(marcum_q1(4.0, 25.0) == doctest::Approx(8.216256647814587e-98).epsilon(1e-6));
  CHECK(marcum_q1(9.0, 25.0) == doctest::Approx(1.0667038640257e-57).epsilon(1e-6));
}

TEST_CASE("P_MD special cases") {
  const HypothesisParams none = make_hypothesis(1.0, 0.0);
  CHECK(none.noncentrality == 0.0);
  CHECK(pmd_analytic(threshold(1.0, 0.01), none) == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(pmd_analytic(0.0, make_hypothesis(1.0, 0.4)) == 0.0);
  CHECK_THROWS_AS(pmd_analytic(0.1, make_hypothesis(0.0, 0.4)), std::invalid_argument);
  CHECK_THROWS_AS(pmd_analytic(-0.1, none), std::invalid_argument);

  const HypothesisParams h = make_hypothesis(2e-4, 0.01);
  CHECK(h.sigma_h1_sq == doctest::Approx(1e-4));
  CHECK(h.noncentrality == doctest::Approx(1.0));
  const HypothesisParams back = hypothesis_from_noncentrality(2e-4, 1.0);
  CHECK(back.lambda_mean == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("lambda_mean") {
  const PilotPattern p(1024, {{1, 2, 3}, {4, 5, 6}}, 1.0, ComplexVector::Ones(1024));
  CHECK(lambda_mean(ComplexVector::Ones(1024), p) == doctest::Approx(3.0 / (1024.0 * 1024.0)).epsilon(1e-15));
  CHECK(lambda_mean(ComplexVector::Zero(1024), p) == 0.0);
  const PilotPattern boosted(1024, {{1, 2, 3}, {4, 5, 6}}, 2.0, ComplexVector::Ones(1024));
  CHECK(lambda_mean(ComplexVector::Ones(1024), boosted) ==
        doctest::Approx(4.0 * lambda_mean(ComplexVector::Ones(1024), p)).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_mean(ComplexVector::Ones(8), p), std::invalid_argument);
}

TEST_CASE("analytic ROC") {
  const std::vector<double> grid = {0.001, 0.01, 0.1, 0.5, 1.0};
  const auto roc0 = roc_analytic(make_hypothesis(1.0, 0.0), grid);
  for (const auto& pt : roc0) CHECK(pt.p_d == doctest::Approx(pt.p_fa).epsilon(1e-10));

  const auto weak = roc_analytic(make_hypothesis(1.0, 0.5), grid);
  const auto strong = roc_analytic(make_hypothesis(1.0, 1.0), grid);
  CHECK(weak.back().p_d == doctest::Approx(1.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(strong[i].p_d >= weak[i].p_d);
    CHECK(weak[i].p_d >= weak[i].p_fa);
    if (i > 0) CHECK(weak[i].p_d >= weak[i - 1].p_d);
  }
  CHECK_THROWS_AS(roc_analytic(make_hypothesis(1.0, 0.5), {0.0}), std::invalid_argument);
}
