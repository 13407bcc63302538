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

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace partsel {

/// Nested location model: the first `free_dims` coordinates carry an unknown
/// mean, the remaining `fixed_dims` are pinned at `fixed_reference`. K = 0 is
/// the parameter-free null model.
struct GaussianModel {
    int free_dims = 0;
    int fixed_dims = 0;
    std::vector<double> fixed_reference;  // size fixed_dims

    [[nodiscard]] int dims() const noexcept { return free_dims + fixed_dims; }

    /// All D coordinates free.
    static GaussianModel all_free(int k) {
        if (k < 1) throw std::invalid_argument("GaussianModel: free dims must be >= 1");
        return {k, 0, {}};
    }

    /// First k coordinates free, the rest pinned at zero.
    static GaussianModel nested(int k, int d) {
        if (k < 0 || d < 1 || k > d) throw std::invalid_argument("GaussianModel: need 0 <= k <= d");
        return {k, d - k, std::vector<double>(static_cast<std::size_t>(d - k), 0.0)};
    }

    /// Parameter-free model pinned at zero in all D coordinates.
    static GaussianModel null_at_zero(int d) { return nested(0, d); }

    void validate() const {
        if (free_dims < 0 || fixed_dims < 0) throw std::invalid_argument("GaussianModel: negative dimension count");
        if (dims() < 1) throw std::invalid_argument("GaussianModel: model must span at least one coordinate");
        if (fixed_reference.size() != static_cast<std::size_t>(fixed_dims))
            throw std::invalid_argument("GaussianModel: fixed_reference size must equal fixed_dims");
    }
};

/// Zero-centered isotropic normal prior with scale tau per free coordinate,
/// or the distinguished improper-flat limit. The improper limit is a valid
/// prior for posteriors and predictive informations conditioned on data, but
/// the evidence is undefined there and operations that need it fail loudly.
class PriorSpec {
  public:
    static PriorSpec normal(double tau) {
        if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("PriorSpec: tau must be positive and finite");
        PriorSpec p;
        p.tau_ = tau;
        return p;
    }

    static PriorSpec improper_flat() noexcept { return PriorSpec{}; }

    [[nodiscard]] bool improper() const noexcept { return !(tau_ > 0.0); }

    [[nodiscard]] double tau() const {
        if (improper()) throw std::logic_error("PriorSpec: improper flat prior has no scale");
        return tau_;
    }

  private:
    PriorSpec() = default;
    double tau_ = std::numeric_limits<double>::quiet_NaN();
};

struct PosteriorSpec {
    std::vector<double> mean;
    std::vector<double> sd;
};

/// Training/generalization split. nu = n_gen / n_train, infinite when the
/// training set is empty (the classical-Bayes, postdictive limit).
struct Partition {
    std::size_t n_train = 0;
    std::size_t n_gen = 0;

    Partition(std::size_t train, std::size_t gen) : n_train(train), n_gen(gen) {
        if (gen < 1) throw std::invalid_argument("Partition: generalization set must be non-empty");
    }

    [[nodiscard]] std::size_t total() const noexcept { return n_train + n_gen; }

    [[nodiscard]] double nu() const noexcept {
        if (n_train == 0) return std::numeric_limits<double>::infinity();
        return static_cast<double>(n_gen) / static_cast<double>(n_train);
    }

    /// Integer realization of a target ratio: n_gen = round(nu*N/(1+nu))
    /// clamped to [1, N-1]; nu = infinity maps to n_gen = N. The realized
    /// ratio is reported by nu().
    static Partition from_nu(double nu, std::size_t n) {
        if (n < 1) throw std::invalid_argument("Partition: dataset must be non-empty");
        if (std::isnan(nu) || nu < 0.0) throw std::invalid_argument("Partition: nu must be >= 0");
        if (std::isinf(nu)) return Partition(0, n);
        if (n < 2) throw std::invalid_argument("Partition: finite nu needs N >= 2");
        double raw = nu * static_cast<double>(n) / (1.0 + nu);
        auto gen = static_cast<long long>(std::llround(raw));
        gen = std::max(1ll, std::min(gen, static_cast<long long>(n) - 1));
        return Partition(n - static_cast<std::size_t>(gen), static_cast<std::size_t>(gen));
    }
};

}  // namespace partsel
