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

#include "partsel/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "partsel/criteria.hpp"
#include "partsel/gaussian.hpp"
#include "partsel/special.hpp"

namespace partsel {

namespace {

void check_sigma_mu(double sigma_mu) {
    if (!(sigma_mu > 0.0) || !std::isfinite(sigma_mu)) throw std::invalid_argument("sigma_mu must be positive and finite");
}

double nu_bracket(double nu) {
    if (std::isnan(nu) || nu < 0.0) throw std::invalid_argument("nu must be >= 0");
    if (nu == 0.0) return 2.0;  // predictive limit
    if (std::isinf(nu)) return std::numeric_limits<double>::infinity();
    return 1.0 + (1.0 + 1.0 / nu) * std::log1p(nu);
}

}  // namespace

double bayes_resolution(double sigma_mu, double tau) {
    check_sigma_mu(sigma_mu);
    if (!(tau > sigma_mu)) throw std::domain_error("bayes_resolution: requires tau > sigma_mu");
    return sigma_mu * std::sqrt(2.0 * std::log(tau / sigma_mu));
}

double bayes_resolution_exact(double sigma_mu, double tau) {
    check_sigma_mu(sigma_mu);
    if (!(tau > sigma_mu)) throw std::domain_error("bayes_resolution_exact: requires tau > sigma_mu");
    // A single observation with noise sigma_mu has exactly this standard
    // error; bisect the sign change of the exact log-Bayes factor in |mean|.
    GaussianModel null = GaussianModel::null_at_zero(1);
    GaussianModel alt = GaussianModel::all_free(1);
    PriorSpec prior = PriorSpec::normal(tau);
    auto log_bf = [&](double mu_hat) {
        SampleSet s = SampleSet::from_stats(1, {mu_hat}, {0.0}, sigma_mu);
        return log_bayes_factor(s, null, alt, prior, prior).log_bf;
    };
    double lo = 0.0;
    double hi = sigma_mu * std::sqrt(2.0 * std::log(tau / sigma_mu)) + 10.0 * sigma_mu;
    while (log_bf(hi) <= 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (log_bf(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double frequentist_resolution(double sigma_mu, double z) {
    check_sigma_mu(sigma_mu);
    if (z < 0.0 || !std::isfinite(z)) throw std::invalid_argument("frequentist_resolution: z must be >= 0");
    return z * sigma_mu;
}

double nu_resolution(double sigma_mu, double nu) {
    check_sigma_mu(sigma_mu);
    return sigma_mu * std::sqrt(nu_bracket(nu));
}

double bic_resolution(double sigma_mu, double n) {
    check_sigma_mu(sigma_mu);
    if (!(n >= 2.0)) throw std::invalid_argument("bic_resolution: n must be >= 2");
    return sigma_mu * std::sqrt(std::log(n));
}

double aic_resolution(double sigma_mu) {
    check_sigma_mu(sigma_mu);
    return sigma_mu * std::numbers::sqrt2_v<double>;
}

double significance_level(int delta_k, double nu) {
    if (delta_k < 1) throw std::invalid_argument("significance_level: delta_k must be a positive integer");
    double bracket = nu_bracket(nu);
    if (std::isinf(bracket)) return 0.0;
    return special::chi2_sf(static_cast<double>(delta_k), static_cast<double>(delta_k) * bracket);
}

double parameter_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior) {
    detail::check_model(model, samples.dims());
    if (prior.improper())
        throw std::domain_error("parameter_information: diverges for the improper flat prior (Bartlett limit)");
    PosteriorSpec post = posterior(samples, model, prior);
    const double tau = prior.tau();
    double info = 0.0;
    for (std::size_t k = 0; k < post.mean.size(); ++k) {
        double s = post.sd[k];
        double m = post.mean[k];
        info += std::log(tau / s) + (s * s + m * m) / (2.0 * tau * tau) - 0.5;
    }
    return info;
}

double missing_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, std::uint64_t budget,
                           std::uint64_t seed) {
    if (samples.size() < 2) throw std::invalid_argument("missing_information: needs at least two observations");
    if (prior.improper())
        throw std::domain_error("missing_information: postdictive term undefined for the improper flat prior");
    const std::size_t n = samples.size();
    LeaveKOut postdictive = leave_k_out_cross_entropy(samples, model, prior, Partition(0, n), budget, seed);
    LeaveKOut predictive = leave_k_out_cross_entropy(samples, model, prior, Partition(n - 1, 1), budget, seed);
    return postdictive.value - predictive.value;
}

double gaussian_volume(std::span<const double> sd) {
    double v = 1.0;
    for (double s : sd) {
        if (!(s > 0.0)) throw std::invalid_argument("gaussian_volume: scales must be positive");
        v *= std::sqrt(2.0 * std::numbers::pi * std::numbers::e) * s;
    }
    return v;
}

double box_volume(double side, int k) {
    if (!(side > 0.0) || k < 0) throw std::invalid_argument("box_volume: need side > 0 and K >= 0");
    return std::pow(side, k);
}

double occam_factor(double v_n, double v_0) {
    if (!(v_n > 0.0) || !(v_0 > 0.0)) throw std::invalid_argument("occam_factor: volumes must be positive");
    return v_n / v_0;
}

OccamSummary occam_summary(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior) {
    detail::check_model(model, samples.dims());
    if (prior.improper()) throw std::domain_error("occam_summary: prior volume diverges for the improper flat prior");
    if (samples.size() < 1) throw std::invalid_argument("occam_summary: needs at least one observation");
    const int k = model.free_dims;
    const double n = static_cast<double>(samples.size());
    OccamSummary out;
    std::vector<double> post_sd(static_cast<std::size_t>(k), samples.sigma() / std::sqrt(n));
    std::vector<double> prior_sd(static_cast<std::size_t>(k), prior.tau());
    out.v_n = gaussian_volume(post_sd);
    out.v_0 = gaussian_volume(prior_sd);
    out.log_occam = 0.5 * k * std::log((samples.sigma() * samples.sigma() / n) / (prior.tau() * prior.tau()));
    out.log_fit_at_mle = -mle_information(samples, model);
    out.approx_log_evidence = out.log_occam + out.log_fit_at_mle;
    out.exact_log_evidence = log_evidence(samples, model, prior);
    out.discrepancy = out.approx_log_evidence - out.exact_log_evidence;
    return out;
}

}  // namespace partsel
