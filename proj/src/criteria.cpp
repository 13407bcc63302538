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

#include "partsel/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "partsel/rng.hpp"

#include "json.hpp"

namespace partsel {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double require_finite_nu(double nu) {
    if (std::isnan(nu) || nu < 0.0) throw std::invalid_argument("nu must be >= 0");
    return nu;
}

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

}  // namespace

namespace detail {

// Exhaustive leave-one-out sum of predictive informations, closed form from
// sufficient statistics. Equals the sum over i of h(x_i | x_{-i}).
double loo_information_sum(const SuffStats& stats, const GaussianModel& model, const PriorSpec& prior, double sigma) {
    const auto n_sz = stats.n;
    if (n_sz < 1) throw std::invalid_argument("leave-one-out: empty dataset");
    if (prior.improper() && n_sz < 2)
        throw std::domain_error("leave-one-out: improper flat prior needs at least two observations");
    const double n = static_cast<double>(n_sz);
    const double s2 = sigma * sigma;
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    double total = 0.0;
    for (std::size_t k = 0; k < k_free; ++k) {
        // posterior from the other n-1 points: mean g*(sum - x_i), variance g*sigma^2
        double g, w;  // w = weight of the full-mean pull-back in the residual
        if (prior.improper()) {
            g = 1.0 / (n - 1.0);
            w = 0.0;
        } else {
            double tau2 = prior.tau() * prior.tau();
            double denom = s2 + (n - 1.0) * tau2;
            g = tau2 / denom;
            w = s2 / denom;
        }
        double pred_var = s2 * (1.0 + g);
        double mu = stats.mean[k];
        double resid_sq = (1.0 + g) * (1.0 + g) * stats.sse[k] + n * mu * mu * w * w;
        total += 0.5 * n * (kLog2Pi + std::log(pred_var)) + resid_sq / (2.0 * pred_var);
    }
    for (int j = 0; j < model.fixed_dims; ++j) {
        std::size_t k = k_free + static_cast<std::size_t>(j);
        double gap = stats.mean[k] - model.fixed_reference[static_cast<std::size_t>(j)];
        double sq = stats.sse[k] + n * gap * gap;
        total += 0.5 * n * (kLog2Pi + 2.0 * std::log(sigma)) + sq / (2.0 * s2);
    }
    return total;
}

}  // namespace detail

namespace {

/// Number of size-k subsets of n elements, capped at `cap` (avoids overflow).
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    k = std::min(k, n - k);
    long double c = 1.0L;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c *= static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(c + 0.5L);
}

bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
    const auto k = static_cast<std::uint32_t>(idx.size());
    for (std::uint32_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::uint32_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

struct SubsetPlan {
    bool exhaustive = true;
    bool closed_form_loo = false;   // N_G == 1: skip enumeration entirely
    bool enumerate_train = false;   // whether subsets index the training side
    std::uint32_t subset_size = 0;  // size of the enumerated side
    std::vector<std::vector<std::uint32_t>> sampled;  // only in sampling mode
    std::uint64_t count = 0;
};

SubsetPlan make_subset_plan(std::size_t n, const Partition& partition, std::uint64_t budget, std::uint64_t seed) {
    if (budget < 1) throw std::invalid_argument("leave-k-out: budget must be >= 1");
    if (partition.total() != n) throw std::invalid_argument("leave-k-out: partition does not sum to the sample size");
    SubsetPlan plan;
    if (partition.n_gen == n) {  // single subset: everything generalizes
        plan.count = 1;
        plan.subset_size = 0;
        plan.enumerate_train = true;
        return plan;
    }
    if (partition.n_gen == 1) {
        plan.closed_form_loo = true;
        plan.count = n;
        return plan;
    }
    plan.enumerate_train = partition.n_train <= partition.n_gen;
    plan.subset_size = static_cast<std::uint32_t>(plan.enumerate_train ? partition.n_train : partition.n_gen);
    std::uint64_t total = binomial_capped(n, plan.subset_size, budget);
    if (total <= budget) {
        plan.exhaustive = true;
        plan.count = total;
        return plan;
    }
    plan.exhaustive = false;
    plan.count = budget;
    RngStream rs = RngStream(seed).derive({0x5B5E7Cull, n, partition.n_gen});
    std::set<std::vector<std::uint32_t>> seen;
    plan.sampled.reserve(budget);
    while (plan.sampled.size() < budget) {
        // Floyd's algorithm: uniform size-k subset without replacement
        std::set<std::uint32_t> pick;
        for (std::uint64_t j = n - plan.subset_size; j < n; ++j) {
            auto t = static_cast<std::uint32_t>(rs.next_below(j + 1));
            if (!pick.insert(t).second) pick.insert(static_cast<std::uint32_t>(j));
        }
        std::vector<std::uint32_t> subset(pick.begin(), pick.end());
        if (seen.insert(subset).second) plan.sampled.push_back(std::move(subset));
    }
    return plan;
}

double leave_k_out_value(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, const Partition& partition,
                         const SubsetPlan& plan) {
    const SuffStats& full = samples.stats();
    const double sigma = samples.sigma();
    const double rescale = static_cast<double>(partition.total()) / static_cast<double>(partition.n_gen);

    if (plan.closed_form_loo) {
        double sum = detail::loo_information_sum(full, model, prior, sigma);
        return rescale * (sum / static_cast<double>(full.n));
    }
    if (partition.n_gen == full.n) {  // N_T = 0: the classical evidence information
        SuffStats empty;
        empty.n = 0;
        empty.mean.assign(full.mean.size(), 0.0);
        empty.sse.assign(full.mean.size(), 0.0);
        return predictive_information_from_stats(full, empty, model, prior, sigma);
    }

    auto train_stats_for = [&](const std::vector<std::uint32_t>& subset) {
        SuffStats side = samples.subset_stats(subset);
        return plan.enumerate_train ? side : complement_stats(full, side);
    };

    double acc = 0.0, comp = 0.0;
    auto accumulate = [&](double v) {
        double t = acc + v;
        comp += (std::abs(acc) >= std::abs(v)) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    };

    std::uint64_t evaluated = 0;
    if (plan.exhaustive) {
        std::vector<std::uint32_t> idx(plan.subset_size);
        for (std::uint32_t i = 0; i < plan.subset_size; ++i) idx[i] = i;
        do {
            SuffStats train = train_stats_for(idx);
            accumulate(predictive_information_from_stats(full, train, model, prior, sigma));
            ++evaluated;
        } while (next_combination(idx, static_cast<std::uint32_t>(full.n)));
    } else {
        for (const auto& subset : plan.sampled) {
            SuffStats train = train_stats_for(subset);
            accumulate(predictive_information_from_stats(full, train, model, prior, sigma));
            ++evaluated;
        }
    }
    return rescale * ((acc + comp) / static_cast<double>(evaluated));
}

}  // namespace

std::string criterion_name(CriterionId id) {
    switch (id) {
        case CriterionId::IC_NU: return "IC_NU";
        case CriterionId::AIC: return "AIC";
        case CriterionId::BIC: return "BIC";
        case CriterionId::LOG_EVIDENCE: return "LOG_EVIDENCE";
        case CriterionId::PSEUDO_BF_TERM: return "PSEUDO_BF_TERM";
        case CriterionId::FRACTIONAL: return "FRACTIONAL";
        case CriterionId::POSTERIOR_BF_TERM: return "POSTERIOR_BF_TERM";
    }
    return "UNKNOWN";
}

std::string CriterionReport::to_json(bool pretty) const {
    nlohmann::ordered_json j;
    j["criterion_id"] = criterion_name(id);
    j["value"] = std::isfinite(value) ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
    j["complexity"] = opt_json(complexity);
    j["n_train"] = n_train ? nlohmann::ordered_json(*n_train) : nullptr;
    j["n_gen"] = n_gen ? nlohmann::ordered_json(*n_gen) : nullptr;
    j["nu"] = opt_json(nu);
    j["model_id"] = model_id;
    j["free_dims"] = free_dims;
    j["budget"] = budget ? nlohmann::ordered_json(*budget) : nullptr;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nullptr;
    j["exhaustive"] = exhaustive ? nlohmann::ordered_json(*exhaustive) : nullptr;
    return pretty ? j.dump(2) : j.dump();
}

double complexity_nu(int k, double nu) {
    if (k < 0) throw std::invalid_argument("complexity_nu: K must be >= 0");
    require_finite_nu(nu);
    if (k == 0) return 0.0;
    if (nu == 0.0) return static_cast<double>(k);
    if (std::isinf(nu)) return std::numeric_limits<double>::infinity();
    return 0.5 * k * (1.0 + (1.0 + 1.0 / nu) * std::log1p(nu));
}

double bic_complexity(int k, double n) {
    if (k < 0) throw std::invalid_argument("bic_complexity: K must be >= 0");
    if (!(n >= 1.0)) throw std::invalid_argument("bic_complexity: n must be >= 1");
    return 0.5 * k * std::log(n);
}

CriterionReport generalized_ic(const SampleSet& samples, const GaussianModel& model, double nu, const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::IC_NU;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.nu = nu;
    r.complexity = complexity_nu(model.free_dims, nu);
    r.value = mle_information(samples, model) + *r.complexity;
    return r;
}

CriterionReport generalized_ic(const SampleSet& samples, const GaussianModel& model, const Partition& partition,
                               const std::string& model_id) {
    if (partition.total() != samples.size()) throw std::invalid_argument("generalized_ic: partition does not sum to N");
    CriterionReport r = generalized_ic(samples, model, partition.nu(), model_id);
    r.n_train = partition.n_train;
    r.n_gen = partition.n_gen;
    return r;
}

CriterionReport aic(const SampleSet& samples, const GaussianModel& model, const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::AIC;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.complexity = static_cast<double>(model.free_dims);
    r.value = mle_information(samples, model) + *r.complexity;
    return r;
}

CriterionReport bic(const SampleSet& samples, const GaussianModel& model, const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::BIC;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.complexity = bic_complexity(model.free_dims, static_cast<double>(samples.size()));
    r.value = mle_information(samples, model) + *r.complexity;
    return r;
}

CriterionReport evidence_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                     const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::LOG_EVIDENCE;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.value = -log_evidence(samples, model, prior);
    return r;
}

BayesFactor log_bayes_factor(const SampleSet& samples, const GaussianModel& model0, const GaussianModel& model1,
                             const PriorSpec& prior0, const PriorSpec& prior1) {
    double h0 = -log_evidence(samples, model0, prior0);
    double h1 = -log_evidence(samples, model1, prior1);
    BayesFactor bf;
    bf.log_bf = h0 - h1;
    bf.posterior_model0 =
        bf.log_bf >= 0.0 ? std::exp(-bf.log_bf) / (1.0 + std::exp(-bf.log_bf)) : 1.0 / (1.0 + std::exp(bf.log_bf));
    return bf;
}

LeaveKOut leave_k_out_cross_entropy(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                    const Partition& partition, std::uint64_t budget, std::uint64_t seed) {
    detail::check_model(model, samples.dims());
    if (prior.improper() && partition.n_train == 0 && model.free_dims > 0)
        throw std::domain_error("leave-k-out: improper flat prior with an empty training set (Bartlett limit)");
    SubsetPlan plan = make_subset_plan(samples.size(), partition, budget, seed);
    LeaveKOut out{0.0, partition, plan.exhaustive, plan.count};
    out.value = leave_k_out_value(samples, model, prior, partition, plan);
    return out;
}

CriterionReport leave_k_out_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                   const Partition& partition, std::uint64_t budget, std::uint64_t seed,
                                   const std::string& model_id) {
    LeaveKOut lko = leave_k_out_cross_entropy(samples, model, prior, partition, budget, seed);
    CriterionReport r;
    r.id = CriterionId::PSEUDO_BF_TERM;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.value = lko.value;
    r.n_train = partition.n_train;
    r.n_gen = partition.n_gen;
    r.nu = partition.nu();
    r.budget = budget;
    r.seed = seed;
    r.exhaustive = lko.exhaustive;
    return r;
}

double pseudo_bayes_factor(const SampleSet& samples, const GaussianModel& model0, const GaussianModel& model1,
                           const PriorSpec& prior0, const PriorSpec& prior1, const Partition& partition, std::uint64_t budget,
                           std::uint64_t seed) {
    detail::check_model(model0, samples.dims());
    detail::check_model(model1, samples.dims());
    // one plan, both models: the estimates share the same subsets
    SubsetPlan plan = make_subset_plan(samples.size(), partition, budget, seed);
    double h0 = leave_k_out_value(samples, model0, prior0, partition, plan);
    double h1 = leave_k_out_value(samples, model1, prior1, partition, plan);
    return h0 - h1;
}

double posterior_bayes_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior) {
    const SuffStats& stats = samples.stats();
    detail::check_model(model, samples.dims());
    if (stats.n < 1) throw std::invalid_argument("posterior_bayes_information: needs at least one observation");
    if (prior.improper() && model.free_dims > 0 && stats.n == 0)
        throw std::domain_error("posterior_bayes_information: improper flat prior with no data");
    const double sigma = samples.sigma();
    const double s2 = sigma * sigma;
    const double n = static_cast<double>(stats.n);
    PosteriorSpec post = posterior_from_stats(stats, model, prior, sigma);
    const auto k_free = static_cast<std::size_t>(model.free_dims);
    double h = 0.0;
    for (std::size_t k = 0; k < k_free; ++k) {
        double pv = post.sd[k] * post.sd[k] + s2 / n;
        double gap = post.mean[k] - stats.mean[k];
        h += 0.5 * n * (kLog2Pi + 2.0 * std::log(sigma)) + stats.sse[k] / (2.0 * s2) + 0.5 * std::log(pv / (s2 / n)) +
             gap * gap / (2.0 * pv);
    }
    for (int j = 0; j < model.fixed_dims; ++j) {
        std::size_t k = k_free + static_cast<std::size_t>(j);
        double gap = stats.mean[k] - model.fixed_reference[static_cast<std::size_t>(j)];
        h += 0.5 * n * (kLog2Pi + 2.0 * std::log(sigma)) + (stats.sse[k] + n * gap * gap) / (2.0 * s2);
    }
    return h;
}

CriterionReport posterior_bayes_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior,
                                       const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::POSTERIOR_BF_TERM;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.value = posterior_bayes_information(samples, model, prior);
    return r;
}

double fractional_bayes_information(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, double b) {
    detail::check_model(model, samples.dims());
    if (!(b > 0.0) || !(b < 1.0)) throw std::invalid_argument("fractional_bayes_information: b must be in (0, 1)");
    if (prior.improper() && model.free_dims > 0)
        throw std::domain_error("fractional_bayes_information: requires a proper prior");
    const SuffStats& stats = samples.stats();
    if (stats.n < 1) throw std::invalid_argument("fractional_bayes_information: needs at least one observation");
    const double sigma = samples.sigma();
    const double s2 = sigma * sigma;
    const double n = static_cast<double>(stats.n);
    const auto k_free = static_cast<std::size_t>(model.free_dims);

    // log E_pi q^b per free coordinate: a likelihood to the power b is a
    // rescaled Gaussian likelihood with sigma^2 -> sigma^2 / b.
    auto log_e_qb = [&](double frac, std::size_t k) {
        double vb = s2 / (n * frac);  // variance of the empirical mean under the tempered likelihood
        double v = vb + prior.tau() * prior.tau();
        double m = stats.mean[k];
        return -0.5 * n * frac * (kLog2Pi + 2.0 * std::log(sigma)) - frac * stats.sse[k] / (2.0 * s2) +
               0.5 * std::log(vb / v) - m * m / (2.0 * v);
    };

    double h = 0.0;
    for (std::size_t k = 0; k < k_free; ++k) h += log_e_qb(b, k) - log_e_qb(1.0, k);
    for (int j = 0; j < model.fixed_dims; ++j) {
        std::size_t k = k_free + static_cast<std::size_t>(j);
        double gap = stats.mean[k] - model.fixed_reference[static_cast<std::size_t>(j)];
        double h_pinned = 0.5 * n * (kLog2Pi + 2.0 * std::log(sigma)) + (stats.sse[k] + n * gap * gap) / (2.0 * s2);
        h += (1.0 - b) * h_pinned;
    }
    return h;
}

CriterionReport fractional_bayes_report(const SampleSet& samples, const GaussianModel& model, const PriorSpec& prior, double b,
                                        const std::string& model_id) {
    CriterionReport r;
    r.id = CriterionId::FRACTIONAL;
    r.model_id = model_id;
    r.free_dims = model.free_dims;
    r.value = fractional_bayes_information(samples, model, prior, b);
    return r;
}

std::string select_model(std::span<const CriterionReport> reports) {
    if (reports.size() < 2) throw std::invalid_argument("select_model: need at least two reports");
    for (const auto& r : reports)
        if (r.id != reports.front().id) throw std::invalid_argument("select_model: mixed criterion kinds");
    const CriterionReport* best = &reports.front();
    for (const auto& r : reports.subspan(1)) {
        bool better = false;
        if (r.value < best->value)
            better = true;
        else if (r.value == best->value) {
            if (r.free_dims < best->free_dims)
                better = true;
            else if (r.free_dims == best->free_dims && r.model_id < best->model_id)
                better = true;
        }
        if (better) best = &r;
    }
    return best->model_id;
}

}  // namespace partsel
