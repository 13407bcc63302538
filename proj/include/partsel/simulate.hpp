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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partsel/criteria.hpp"
#include "partsel/curves.hpp"
#include "partsel/model.hpp"
#include "partsel/rng.hpp"
#include "partsel/samples.hpp"

#include "json.hpp"

namespace partsel::sim {

// Seeded Monte Carlo harness. Replicates are keyed by
// (seed, experiment, cell, replicate), so reports are bit-identical for a
// given (config, seed) regardless of how many workers run them.

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

Estimate mean_se(std::span<const double> xs);

struct ExperimentConfig {
    std::vector<double> true_mean{0.0};
    double sigma = 1.0;
    double tau = 10.0;
    bool improper_prior = false;
    std::vector<std::size_t> n_grid{100};
    std::vector<double> nu_grid{0.0, 0.1, 1.0, 10.0};
    std::vector<double> tau_grid{10.0, 100.0, 1000.0, 10000.0};
    std::size_t replicates = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = kDefaultBudget;

    [[nodiscard]] PriorSpec prior() const {
        return improper_prior ? PriorSpec::improper_flat() : PriorSpec::normal(tau);
    }
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct ExperimentReport {
    std::string experiment;
    nlohmann::ordered_json config;
    nlohmann::ordered_json results;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
    [[nodiscard]] std::string dump(bool pretty = false) const;
};

/// N iid draws from N(mu, sigma^2 I); reproducible per stream.
SampleSet generate_dataset(std::span<const double> mu, double sigma, std::size_t n, std::size_t d, RngStream& stream);

/// Exact expectation of the rescaled predictive cross entropy
/// (N/N_G) E h(X^{N_G} | X^{N_T}) for Gaussian truth, any prior in scope.
double analytic_cross_entropy(const ExperimentConfig& cfg, const Partition& partition, const GaussianModel& model,
                              const PriorSpec& prior);

struct TrueCrossEntropy {
    Estimate mc;
    double analytic = 0.0;
    Partition partition{0, 1};
};

/// Monte Carlo estimate of the true cross entropy by fresh-data simulation,
/// with the closed-form expectation alongside.
TrueCrossEntropy true_cross_entropy(const ExperimentConfig& cfg, const Partition& partition, const GaussianModel& model,
                                    const PriorSpec& prior, unsigned threads = 1);

/// Mean IC^nu against the true cross entropy, per (K, partition) cell;
/// reports z-scores. The truth must be Gaussian (it is, by construction).
ExperimentReport unbiasedness_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// Per-N detection thresholds: frequentist rule of thumb against the Bayes
/// rule for each prior scale in tau_grid, plus ratios to the frequentist
/// threshold. Columns: n, threshold_freq, threshold_bayes_tau<i>..., ratio_tau<i>...
Curve resolution_curve(const ExperimentConfig& cfg, double z = 2.0);

/// Smallest sample size at which a fixed displacement is detected by the
/// frequentist rule: N = (z sigma / mu)^2.
double frequentist_detection_n(double mu, double sigma, double z = 2.0);

/// Complexity as a function of the data partition. Columns: nu, complexity.
Curve complexity_curve(int k, std::span<const double> nu_grid);

/// Effective significance level over the partition grid. Columns: nu, alpha.
Curve significance_curve(int delta_k, std::span<const double> nu_grid);

struct PrepostResult {
    Curve curve;  // n, dpred_mean, dpred_se, dpost_mean, dpost_se
    std::optional<std::size_t> pred_crossing_idx;
    std::optional<std::size_t> post_crossing_idx;
    std::size_t post_argmin_idx = 0;
};

/// Expected cross-entropy differences (null minus alternative) for the
/// predictive (1|N-1) and postdictive (N|0) rules over the N grid, under a
/// true displacement true_mean[0]. Positive values select the alternative.
PrepostResult figure_prepost(const ExperimentConfig& cfg, unsigned threads = 1);

ExperimentReport prepost_report(const ExperimentConfig& cfg, unsigned threads = 1);

/// Pair-binning demonstration: decisions before/after halving the sample
/// count; AIC decisions are invariant, the BIC penalty drops by (K/2) log 2.
ExperimentReport binning_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

struct LindleyWitness {
    double r = 0.0;       // N tau^2 / sigma^2 at the witness
    std::size_t n = 0;
    double sigma = 1.0;
    double tau = 0.0;
    double mu_hat = 0.0;
    double z = 0.0;
    double p_two_sided = 0.0;
    double posterior_null = 0.0;
    double log_bf = 0.0;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Finds a configuration rejected by the frequentist rule of thumb whose
/// posterior null probability still meets the target; verified through the
/// exact evidence path. Deterministic (no sampling involved).
LindleyWitness lindley_search(double confidence, double posterior_target, std::size_t n = 100, double sigma = 1.0);

enum class LossScenario { singleton, nested_null, offset_truth };

/// Loss-ratio measurement: predictive cross entropy of the selected model
/// relative to the per-dataset best of the menu (ratio >= 1 by construction).
ExperimentReport loss_ratio_experiment(const ExperimentConfig& cfg, LossScenario scenario, unsigned threads = 1);

struct DerivativeCheck {
    double predictive = 0.0;        // MC mean of the leave-one-out estimate at N
    double n_times_fd = 0.0;        // N x central finite difference of h(x^N)
    double relative_error = 0.0;
};

/// Checks the derivative heuristic: the predictive estimate approximates
/// N d/dN of the postdictive one.
DerivativeCheck derivative_check(const ExperimentConfig& cfg, std::size_t n, unsigned threads = 1);

}  // namespace partsel::sim
