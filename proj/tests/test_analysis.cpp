/*
 * Copyright (c) 2026, the partsel authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracle.hpp"
#include "partsel/analysis.hpp"
#include "partsel/criteria.hpp"
#include "partsel/rng.hpp"
#include "partsel/simulate.hpp"
#include "partsel/special.hpp"

using namespace partsel;

TEST_CASE("bayes resolution: frozen ratios and monotonicity") {
    double sm = 0.25;
    CHECK(bayes_resolution(sm, sm * std::exp(2.0)) == doctest::Approx(2.0 * sm).epsilon(1e-13));
    CHECK(bayes_resolution(sm, sm * std::exp(0.5)) == doctest::Approx(sm).epsilon(1e-13));
    CHECK(bayes_resolution(sm, 20.0) < bayes_resolution(sm, 40.0));
    CHECK_THROWS_AS(bayes_resolution(1.0, 0.5), std::domain_error);
}

TEST_CASE("bayes resolution: exact root agrees with the leading order for vague priors") {
    for (double sm : {0.03, 1.0}) {
        for (double ratio : {100.0, 1000.0, 1e5}) {
            double tau = ratio * sm;
            double lead = bayes_resolution(sm, tau);
            double exact = bayes_resolution_exact(sm, tau);
            CHECK(std::abs(exact - lead) <= 0.05 * lead);
            // the root actually zeroes the log-Bayes factor
            SampleSet w = SampleSet::from_stats(1, {exact}, {0.0}, sm);
            BayesFactor bf = log_bayes_factor(w, GaussianModel::null_at_zero(1), GaussianModel::all_free(1),
                                              PriorSpec::normal(tau), PriorSpec::normal(tau));
            CHECK(std::abs(bf.log_bf) < 1e-9);
        }
    }
}

TEST_CASE("frequentist resolution and tail probabilities") {
    CHECK(frequentist_resolution(0.5) == 1.0);
    CHECK(frequentist_resolution(0.5, 0.0) == 0.0);
    CHECK(special::two_sided_p(0.0) == 1.0);
    CHECK(special::two_sided_p(2.0) == doctest::Approx(0.04550026389635842).epsilon(1e-10));
    // sigma_mu halves when N quadruples
    double sigma = 2.0;
    CHECK(frequentist_resolution(sigma / std::sqrt(400.0)) ==
          doctest::Approx(0.5 * frequentist_resolution(sigma / std::sqrt(100.0))).epsilon(1e-14));
}

TEST_CASE("partition resolutions: limits and frozen values") {
    double sm = 1.0;
    CHECK(nu_resolution(sm, 0.0) == doctest::Approx(aic_resolution(sm)).epsilon(1e-14));
    CHECK(aic_resolution(sm) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(nu_resolution(sm, 1.0) == doctest::Approx(std::sqrt(1.0 + 2.0 * std::numbers::ln2_v<double>)).epsilon(1e-14));
    CHECK(nu_resolution(sm, 1.0) == doctest::Approx(1.544764).epsilon(1e-5));
    CHECK(bic_resolution(sm, std::exp(2.0)) == doctest::Approx(aic_resolution(sm)).epsilon(1e-13));
    CHECK(std::isinf(nu_resolution(sm, std::numeric_limits<double>::infinity())));
    CHECK_THROWS_AS(bic_resolution(sm, 1.5), std::invalid_argument);

    // continuity and strict increase in nu
    double prev = nu_resolution(sm, 0.0);
    for (int i = 0; i <= 80; ++i) {
        double nu = std::pow(10.0, -5.0 + 10.0 * i / 80.0);
        double r = nu_resolution(sm, nu);
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("all thresholds scale linearly in sigma_mu") {
    RngStream rs(3);
    for (int rep = 0; rep < 20; ++rep) {
        double sm = 0.1 + rs.next_double();
        double c = 0.5 + 4.0 * rs.next_double();
        CHECK(frequentist_resolution(c * sm) == doctest::Approx(c * frequentist_resolution(sm)).epsilon(1e-12));
        CHECK(nu_resolution(c * sm, 2.5) == doctest::Approx(c * nu_resolution(sm, 2.5)).epsilon(1e-12));
        CHECK(bic_resolution(c * sm, 50.0) == doctest::Approx(c * bic_resolution(sm, 50.0)).epsilon(1e-12));
        double tau = 500.0 * std::max(sm, c * sm);
        CHECK(bayes_resolution(c * sm, c * tau) == doctest::Approx(c * bayes_resolution(sm, tau)).epsilon(1e-12));
    }
}

TEST_CASE("significance level: frozen values against the chi-squared oracle") {
    CHECK(significance_level(2, 0.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(significance_level(1, 0.0) == doctest::Approx(0.15729920705028513).epsilon(1e-9));
    CHECK(significance_level(1, 0.0) == doctest::Approx(oracle::chi2_sf_quadrature(1.0, 2.0)).epsilon(1e-9));
    CHECK(significance_level(2, 1.0) ==
          doctest::Approx(oracle::chi2_sf_quadrature(2.0, 2.0 * (1.0 + 2.0 * std::numbers::ln2_v<double>))).epsilon(1e-9));
    CHECK(significance_level(1, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK_THROWS_AS(significance_level(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(significance_level(1, -1.0), std::invalid_argument);
}

TEST_CASE("significance level: strictly decreasing on a 61-point grid") {
    for (int dk : {1, 2}) {
        double prev = significance_level(dk, 0.0);
        for (int i = 0; i < 61; ++i) {
            double nu = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
            double a = significance_level(dk, nu);
            CHECK(a < prev);
            prev = a;
        }
    }
}

TEST_CASE("regularized incomplete gamma against quadrature across the argument range") {
    for (double k : {1.0, 2.0, 5.0, 17.0, 60.0}) {
        for (double x : {0.25, 1.0, 4.0, 20.0, 120.0, 900.0}) {
            double mine = special::chi2_sf(k, x);
            double quad = oracle::chi2_sf_quadrature(k, x);
            if (quad > 1e-280) CHECK(mine == doctest::Approx(quad).epsilon(1e-10));
        }
    }
    CHECK(special::chi2_cdf(3.0, 0.0) == 0.0);
    CHECK(special::chi2_sf(3.0, 0.0) == 1.0);
}

TEST_CASE("parameter information: zero data, frozen case, quadrature") {
    GaussianModel alt = GaussianModel::all_free(1);
    SampleSet empty(1, 1.0);
    CHECK(parameter_information(empty, alt, PriorSpec::normal(2.0)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    SampleSet one = SampleSet::from_data(std::vector<double>{0.0}, 1.0);
    double info = parameter_information(one, alt, PriorSpec::normal(1.0));
    CHECK(info == doctest::Approx(0.5 * std::numbers::ln2_v<double> + 0.25 - 0.5).epsilon(1e-12));
    CHECK(info == doctest::Approx(0.096574).epsilon(1e-5));

    // quadrature KL for a random dataset
    RngStream rs(12);
    std::vector<double> data(7);
    for (auto& v : data) v = rs.next_normal() + 0.8;
    SampleSet s = SampleSet::from_data(data, 1.3);
    double tau = 2.2;
    double closed = parameter_information(s, alt, PriorSpec::normal(tau));
    PosteriorSpec post = posterior(s, alt, PriorSpec::normal(tau));
    auto integrand = [&](double theta) {
        double lp = oracle::log_normal_pdf(theta, post.mean[0], post.sd[0]);
        return std::exp(lp) * (lp - oracle::log_normal_pdf(theta, 0.0, tau));
    };
    double quad = oracle::adaptive_simpson(integrand, post.mean[0] - 14.0 * post.sd[0], post.mean[0] + 14.0 * post.sd[0], 1e-13);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-9));

    CHECK_THROWS_AS(parameter_information(s, alt, PriorSpec::improper_flat()), std::domain_error);
}

TEST_CASE("parameter information grows with sample size in expectation") {
    GaussianModel alt = GaussianModel::all_free(1);
    PriorSpec prior = PriorSpec::normal(2.0);
    RngStream root(2718);
    double prev = -1.0;
    for (std::size_t n : {2u, 8u, 32u, 128u}) {
        std::vector<double> infos(1000);
        for (std::size_t i = 0; i < infos.size(); ++i) {
            RngStream rs = root.derive({n, i});
            SampleSet s = sim::generate_dataset(std::vector<double>{0.0}, 1.0, n, 1, rs);
            infos[i] = parameter_information(s, alt, prior);
            CHECK(infos[i] >= 0.0);
        }
        double mean = sim::mean_se(infos).value;
        CHECK(mean > prev);
        prev = mean;
    }
}

TEST_CASE("missing information: parameter-free models carry none") {
    RngStream rs(44);
    std::vector<double> data(30);
    for (auto& v : data) v = rs.next_normal();
    SampleSet s = SampleSet::from_data(data, 1.0);
    GaussianModel null = GaussianModel::null_at_zero(1);
    double gap = missing_information(s, null, PriorSpec::normal(1.0), kDefaultBudget, 1);
    CHECK(std::abs(gap) <= 1e-9);
    CHECK_THROWS_AS(missing_information(s, null, PriorSpec::improper_flat(), kDefaultBudget, 1), std::domain_error);
    SampleSet tiny = SampleSet::from_data(std::vector<double>{1.0}, 1.0);
    CHECK_THROWS_AS(missing_information(tiny, null, PriorSpec::normal(1.0), kDefaultBudget, 1), std::invalid_argument);
}

TEST_CASE("volumes: boxes, Gaussians, Occam factor") {
    CHECK(box_volume(2.0, 3) == 8.0);
    CHECK(box_volume(5.0, 0) == 1.0);
    double unit_sd = 1.0 / std::sqrt(2.0 * std::numbers::pi * std::numbers::e);
    CHECK(gaussian_volume(std::vector<double>{unit_sd}) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gaussian_volume(std::vector<double>{unit_sd, unit_sd}) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(occam_factor(0.25, 2.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK_THROWS_AS(gaussian_volume(std::vector<double>{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(occam_factor(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("Occam decomposition error shrinks with sample size") {
    GaussianModel alt = GaussianModel::all_free(1);
    PriorSpec prior = PriorSpec::normal(10.0);
    RngStream root(8080);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
        std::vector<double> disc(200);
        for (std::size_t i = 0; i < disc.size(); ++i) {
            RngStream rs = root.derive({n, i});
            SampleSet s = sim::generate_dataset(std::vector<double>{0.0}, 1.0, n, 1, rs);
            disc[i] = std::abs(occam_summary(s, alt, prior).discrepancy);
        }
        double mean = sim::mean_se(disc).value;
        CHECK(mean < prev);
        prev = mean;
        if (n == 10000) CHECK(mean <= 0.05);
    }
}

TEST_CASE("Occam summary pieces are consistent") {
    SampleSet s = SampleSet::from_data(std::vector<double>{0.5, 1.5, -0.5, 0.5}, 1.0);
    OccamSummary sum = occam_summary(s, GaussianModel::all_free(1), PriorSpec::normal(4.0));
    CHECK(sum.log_occam == doctest::Approx(std::log(occam_factor(sum.v_n, sum.v_0))).epsilon(1e-12));
    CHECK(sum.approx_log_evidence == doctest::Approx(sum.log_occam + sum.log_fit_at_mle).epsilon(1e-12));
    CHECK(sum.discrepancy == doctest::Approx(sum.approx_log_evidence - sum.exact_log_evidence).epsilon(1e-12));
}
