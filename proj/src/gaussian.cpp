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

#include "partsel/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace partsel {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

double log_2pi_sigma2(double sigma) { return kLog2Pi + 2.0 * std::log(sigma); }

/// Squared deviation of a pinned coordinate's data from its reference value.
double pinned_sq_sum(const SuffStats& s, std::size_t k, double ref) {
    double gap = s.mean[k] - ref;
    return s.sse[k] + static_cast<double>(s.n) * gap * gap;
}

}  // namespace

namespace detail {

void check_model(const GaussianModel& model, std::size_t dims) {
    model.validate();
    if (static_cast<std::size_t>(model.dims()) != dims)
        throw std::invalid_argument("model dimension K+J does not match the sample dimension D");
}

}  // namespace detail

double mle_information_from_stats(const SuffStats& stats, const GaussianModel& model, double sigma) {
    detail::check_model(model, stats.mean.size());
    if (stats.n < 1) throw std::invalid_argument("mle_information: needs at least one observation");
    const double n = static_cast<double>(stats.n);
    const double base = 0.5 * n * log_2pi_sigma2(sigma);
    const double inv2s2 = 0.5 / (sigma * sigma);
    double h = 0.0;
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    for (std::size_t k = 0; k < k_free; ++k) h += base + stats.sse[k] * inv2s2;
    for (int j = 0; j < model.fixed_dims; ++j) {
        std::size_t k = k_free + static_cast<std::size_t>(j);
        h += base + pinned_sq_sum(stats, k, model.fixed_reference[static_cast<std::size_t>(j)]) * inv2s2;
    }
    return h;
}

double mle_information(const SampleSet& samples, const GaussianModel& model) {
    return mle_information_from_stats(samples.stats(), model, samples.sigma());
}

double log_evidence_from_stats(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma) {
    detail::check_model(model, stats.mean.size());
    if (prior.improper() && model.free_dims > 0)
        throw std::domain_error("log_evidence: undefined for the improper flat prior (Bartlett limit)");
    if (stats.n == 0) return 0.0;
    const double n = static_cast<double>(stats.n);
    const double s2 = sigma * sigma;
    const double base = 0.5 * n * log_2pi_sigma2(sigma);
    const double inv2s2 = 0.5 / s2;
    double log_q = 0.0;
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    if (k_free > 0) {
        const double tau2 = prior.tau() * prior.tau();
        const double v = s2 / n + tau2;  // marginal variance of the empirical mean
        for (std::size_t k = 0; k < k_free; ++k) {
            double m = stats.mean[k];
            log_q += -base - stats.sse[k] * inv2s2 + 0.5 * std::log(s2 / (n * v)) - m * m / (2.0 * v);
        }
    }
    for (int j = 0; j < model.fixed_dims; ++j) {
        std::size_t k = k_free + static_cast<std::size_t>(j);
        log_q -= base + pinned_sq_sum(stats, k, model.fixed_reference[static_cast<std::size_t>(j)]) * inv2s2;
    }
    return log_q;
}

double log_evidence(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior) {
    if (samples.size() < 1) throw std::invalid_argument("log_evidence: needs at least one observation");
    return log_evidence_from_stats(samples.stats(), model, prior, samples.sigma());
}

PosteriorSpec posterior_from_stats(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma) {
    detail::check_model(model, stats.mean.size());
    if (prior.improper() && stats.n == 0) throw std::domain_error("posterior: improper flat prior needs at least one observation");
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    PosteriorSpec post;
    post.mean.resize(k_free);
    post.sd.resize(k_free);
    const double n = static_cast<double>(stats.n);
    const double s2 = sigma * sigma;
    for (std::size_t k = 0; k < k_free; ++k) {
        if (prior.improper()) {
            post.mean[k] = stats.mean[k];
            post.sd[k] = sigma / std::sqrt(n);
        } else {
            const double tau2 = prior.tau() * prior.tau();
            double denom = s2 + n * tau2;
            post.mean[k] = stats.mean[k] * n * tau2 / denom;
            post.sd[k] = sigma * prior.tau() / std::sqrt(denom);
        }
    }
    return post;
}

PosteriorSpec posterior(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior) {
    return posterior_from_stats(samples.stats(), model, prior, samples.sigma());
}

double predictive_information_from_stats(const SuffStats& full, const SuffStats& train, const GaussianModel& model,
                                         const PriorSpec& prior, double sigma) {
    detail::check_model(model, full.mean.size());
    if (train.n > full.n) throw std::invalid_argument("predictive_information: training set larger than the data");
    const std::size_t n_gen = full.n - train.n;
    if (n_gen == 0) throw std::invalid_argument("predictive_information: generalization set must be non-empty");
    if (!prior.improper()) {
        double h_full = -log_evidence_from_stats(full, model, prior, sigma);
        double h_train = -log_evidence_from_stats(train, model, prior, sigma);
        return h_full - h_train;
    }
    // Flat limit: the prior normalization cancels in the difference whenever
    // the training set is non-empty.
    if (train.n == 0 && model.free_dims > 0)
        throw std::domain_error("predictive_information: improper flat prior with an empty training set (Bartlett limit)");
    const double s2 = sigma * sigma;
    const double base = 0.5 * static_cast<double>(n_gen) * log_2pi_sigma2(sigma);
    const double inv2s2 = 0.5 / s2;
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    double h = 0.0;
    for (std::size_t k = 0; k < k_free; ++k) {
        h += base + (full.sse[k] - train.sse[k]) * inv2s2 +
             0.5 * std::log(static_cast<double>(full.n) / static_cast<double>(train.n));
    }
    if (model.fixed_dims > 0) {
        SuffStats gen = complement_stats(full, train);
        for (int j = 0; j < model.fixed_dims; ++j) {
            std::size_t k = k_free + static_cast<std::size_t>(j);
            h += base + pinned_sq_sum(gen, k, model.fixed_reference[static_cast<std::size_t>(j)]) * inv2s2;
        }
    }
    return h;
}

double predictive_information(const SampleSet& full, std::span<const std::uint32_t> train_indices, const GaussianModel& model,
                              const PriorSpec& prior) {
    SuffStats train = full.subset_stats(train_indices);
    return predictive_information_from_stats(full.stats(), train, model, prior, full.sigma());
}

}  // namespace partsel
