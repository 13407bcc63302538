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

#include "partsel/gaussian.hpp"
#include "partsel/model.hpp"
#include "partsel/samples.hpp"

namespace partsel {

enum class CriterionId { IC_NU, AIC, BIC, LOG_EVIDENCE, PSEUDO_BF_TERM, FRACTIONAL, POSTERIOR_BF_TERM };

std::string criterion_name(CriterionId id);

/// One criterion evaluation. `value` is always on the information scale
/// (nats, smaller is better), so select_model can compare reports of any
/// criterion kind uniformly. For IC-form criteria value = fit + complexity.
struct CriterionReport {
    CriterionId id = CriterionId::AIC;
    double value = 0.0;
    std::optional<double> complexity;
    std::optional<std::size_t> n_train;
    std::optional<std::size_t> n_gen;
    std::optional<double> nu;
    std::string model_id;
    int free_dims = 0;
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    std::optional<bool> exhaustive;

    /// Flat JSON object, one key per field (null when not applicable).
    [[nodiscard]] std::string to_json(bool pretty = false) const;
};

/// Complexity K_nu = (K/2) [1 + (1 + 1/nu) log(1 + nu)].
/// nu = 0 returns the predictive limit K exactly; nu = infinity returns
/// +infinity (the flat-prior postdictive limit), except that K = 0 is free at
/// every partition.
double complexity_nu(int k, double nu);

/// BIC penalty (K/2) log n, exposed with a real-valued n so the crossover
/// with the AIC penalty can be checked off the integer grid.
double bic_complexity(int k, double n);

/// IC^nu = mle_information + complexity_nu(K, nu). The fit term does not
/// depend on the partition; nu is used as given (not realized to integers).
CriterionReport generalized_ic(const SampleSet& samples, const GaussianModel& model, double nu, const std::string& model_id);

/// Same, for an integer partition of this dataset; the realized ratio is
/// recorded in the report.
CriterionReport generalized_ic(const SampleSet& samples, const GaussianModel& model, const Partition& partition,
                               const std::string& model_id);

CriterionReport aic(const SampleSet& samples, const GaussianModel& model, const std::string& model_id);
CriterionReport bic(const SampleSet& samples, const GaussianModel& model, const std::string& model_id);

/// Evidence information h(x^N) = -log q(x^N) as a report (smaller is better).
CriterionReport evidence_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                     const std::string& model_id);

struct BayesFactor {
    double log_bf = 0.0;          // h0 - h1; negative selects model zero
    double posterior_model0 = 0.5;  // 1 / (1 + exp(log_bf)) under equal model priors
    [[nodiscard]] bool selects_model0() const noexcept { return log_bf < 0.0; }
};

BayesFactor log_bayes_factor(const SampleSet& samples, const GaussianModel& model0, const GaussianModel& model1,
                             const PriorSpec& prior0, const PriorSpec& prior1);

struct LeaveKOut {
    double value = 0.0;  // (N / N_G) x mean predictive information over subsets
    Partition partition{0, 1};
    bool exhaustive = true;
    std::uint64_t subsets_evaluated = 0;
};

/// Leave-k-out cross-entropy estimate. Exhaustive over all C(N, N_G) subsets
/// when that count fits the budget (always for N_G = 1, where the exhaustive
/// average has a closed form); otherwise a seeded uniform subsample of
/// `budget` distinct subsets. Deterministic given (seed, budget).
LeaveKOut leave_k_out_cross_entropy(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                    const Partition& partition, std::uint64_t budget, std::uint64_t seed);

CriterionReport leave_k_out_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                   const Partition& partition, std::uint64_t budget, std::uint64_t seed,
                                   const std::string& model_id);

/// log pseudo-Bayes factor: difference of leave-k-out estimates on the same
/// subsets; negative selects model zero. Reduces to the exact log-Bayes
/// factor when the training set is empty.
double pseudo_bayes_factor(const SampleSet& samples, const GaussianModel& model0, const GaussianModel& model1,
                           const PriorSpec& prior0, const PriorSpec& prior1, const Partition& partition, std::uint64_t budget,
                           std::uint64_t seed);

/// Aitkin's posterior-Bayes information h(x^N | x^N): -log of the likelihood
/// averaged over the posterior. Data enter twice by construction.
double posterior_bayes_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior);

CriterionReport posterior_bayes_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                       const std::string& model_id);

/// Fractional-Bayes information log E_pi q^b - log E_pi q for b in (0, 1).
double fractional_bayes_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, double b);

CriterionReport fractional_bayes_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, double b,
                                        const std::string& model_id);

/// Minimal-value model among reports of one criterion kind; exact-float ties
/// break toward smaller K, then lexicographic label.
std::string select_model(std::span<const CriterionReport> reports);

namespace detail {
/// Sum over i of h(x_i | x_{-i}) in closed form from sufficient statistics
/// (the exhaustive leave-one-out total). Used by the simulation fast paths.
double loo_information_sum(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma);
}  // namespace detail

}  // namespace partsel
