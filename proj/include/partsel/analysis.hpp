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

#pragma once

#include <cstdint>
#include <span>

#include "partsel/model.hpp"
#include "partsel/samples.hpp"

namespace partsel {

// Closed-form resolution, significance, information, and volume analytics.
// All thresholds scale linearly in sigma_mu = sigma / sqrt(N).

/// Leading-order equal-evidence displacement threshold of the conjugate Bayes
/// rule: sigma_mu * sqrt(2 log(tau / sigma_mu)). Requires tau > sigma_mu.
double bayes_resolution(double sigma_mu, double tau);

/// Exact threshold: the |mean| at which the log-Bayes factor changes sign,
/// found numerically through the evidence code path. Agrees with the
/// leading-order formula within 5% once tau/sigma_mu >= 100.
double bayes_resolution_exact(double sigma_mu, double tau);

/// Frequentist rule-of-thumb threshold z * sigma_mu.
double frequentist_resolution(double sigma_mu, double z = 2.0);

/// Displacement threshold of the partition-nu decision rule:
/// sigma_mu * sqrt(1 + (1 + 1/nu) log(1 + nu)); nu = 0 gives the AIC limit.
double nu_resolution(double sigma_mu, double nu);

double bic_resolution(double sigma_mu, double n);
double aic_resolution(double sigma_mu);

/// Effective significance level of the partition-nu rule:
/// alpha = SF[chi2_dk](dk * [1 + (1 + 1/nu) log(1 + nu)]).
double significance_level(int delta_k, double nu);

/// Expected-parameter-information content of the data: KL divergence of the
/// posterior from the prior (closed form for Gaussians, always >= 0).
double parameter_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior);

/// Gap between the postdictive and predictive cross-entropy estimates,
/// h(x^N) - (leave-one-out estimate); equals the prior-to-posterior KL
/// divergence up to an O(1) term. Requires N >= 2 and a proper prior.
double missing_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, std::uint64_t budget,
                           std::uint64_t seed);

/// Entropic volume of a Gaussian with the given per-coordinate scales:
/// (2 pi e)^(K/2) * prod(sd).
double gaussian_volume(std::span<const double> sd);

/// Entropic volume of a uniform distribution on a K-cube of the given side.
double box_volume(double side, int k);

/// Occam factor V_N / V_0.
double occam_factor(double v_n, double v_0);

/// Occam decomposition of the evidence: log q(x^N) ~ log(V_N/V_0) + log
/// q(x^N | theta_hat), with V_N the entropic volume of the flat-prior
/// posterior. Reports the approximation against the exact evidence.
struct OccamSummary {
    double v_n = 0.0;
    double v_0 = 0.0;
    double log_occam = 0.0;
    double log_fit_at_mle = 0.0;
    double approx_log_evidence = 0.0;
    double exact_log_evidence = 0.0;
    double discrepancy = 0.0;  // approx - exact
};

OccamSummary occam_summary(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior);

}  // namespace partsel
