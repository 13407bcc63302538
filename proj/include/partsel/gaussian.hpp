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

// Exact conjugate-Gaussian probability kernel. All informations are in nats
// (natural log throughout), all arithmetic in log space so that evidence is
// stable from sufficient statistics up to very large N.

/// -log of the model likelihood at the maximum-likelihood parameters.
/// Free coordinates contribute (N/2) log(2 pi sigma^2) + sse/(2 sigma^2);
/// pinned coordinates additionally pay the offset from theta_perp.
double mle_information(const SampleSet& samples, const GaussianModel& model);
double mle_information_from_stats(const SuffStats& stats, const GaussianModel& model, double sigma);

/// Exact log marginal likelihood of the conjugate normal-normal model.
/// Requires a proper prior unless the model is parameter free; the improper
/// flat limit has no finite evidence and throws std::domain_error.
double log_evidence(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior);
double log_evidence_from_stats(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma);

/// Conjugate posterior for the free coordinates. With N = 0 and a proper
/// prior this is the prior itself; with the improper flat prior and N >= 1 it
/// is N(empirical mean, sigma^2/N).
PosteriorSpec posterior(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior);
PosteriorSpec posterior_from_stats(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma);

/// Predictive information h(x_gen | x_train) = h(x_all) - h(x_train), where
/// the training set is given by observation indices into `full`. With a
/// proper prior this is an exact difference of evidences; with the improper
/// flat prior the flat-limit closed form is used, which is finite whenever
/// the training set is non-empty.
double predictive_information(const SampleSet& full, std::span<const std::uint32_t> train_indices, const GaussianModel& model,
                              const PriorSpec& prior);

/// Same, from precomputed statistics of the whole set and the training set.
double predictive_information_from_stats(const SuffStats& full, const SuffStats& train, const GaussianModel& model,
                                         const PriorSpec& prior, double sigma);

namespace detail {
void check_model(const GaussianModel& model, std::size_t dims);
}

}  // namespace partsel
