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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace partsel {

/// Per-coordinate sufficient statistics: count, empirical mean, and sum of
/// squared deviations from the mean. Everything downstream (evidence,
/// criteria, predictive informations) is a function of these.
struct SuffStats {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> sse;
};

/// Statistics of the complement of a subset, recovered exactly from the whole
/// and the subset via the squared-deviation decomposition
///   S_N - S_A - S_B = (n_A n_B / N) (mean_A - mean_B)^2.
SuffStats complement_stats(const SuffStats& whole, const SuffStats& part);

/// N observations in D coordinates with known isotropic noise scale sigma.
/// Column-major storage; sufficient statistics are cached and maintained
/// incrementally (Welford) under append/remove, and by compensated two-pass
/// reduction on bulk construction.
///
/// A SampleSet may also be constructed from statistics alone (no raw data);
/// operations that need the raw observations throw in that case.
class SampleSet {
  public:
    SampleSet(std::size_t dims, double sigma);

    static SampleSet from_columns(std::vector<std::vector<double>> columns, double sigma);
    static SampleSet from_rows(const std::vector<std::vector<double>>& rows, std::size_t dims, double sigma);
    static SampleSet from_data(std::span<const double> values, double sigma);  // single column
    static SampleSet from_stats(std::size_t n, std::vector<double> mean, std::vector<double> sse, double sigma);

    /// One observation per row, D numeric columns, comma separated, header
    /// optional. Sigma is always supplied by the caller, never inferred.
    static SampleSet from_csv(const std::string& path, double sigma);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] bool has_data() const noexcept { return has_data_; }

    [[nodiscard]] const std::vector<double>& column(std::size_t k) const;
    [[nodiscard]] double mean(std::size_t k) const { return stats_.mean.at(k); }
    [[nodiscard]] double sse(std::size_t k) const { return stats_.sse.at(k); }
    [[nodiscard]] const SuffStats& stats() const noexcept { return stats_; }

    void append(std::span<const double> row);
    void remove_last();

    /// Direct two-pass statistics of the given observation indices.
    [[nodiscard]] SuffStats subset_stats(std::span<const std::uint32_t> indices) const;

    /// Recompute the cache from raw data (compensated two-pass).
    [[nodiscard]] SuffStats recomputed_stats() const;

    /// Adjacent pairs replaced by their means: N -> N/2, sigma -> sigma/sqrt(2).
    /// Requires even N and raw data.
    [[nodiscard]] SampleSet binned_pairs() const;

  private:
    void require_data(const char* op) const;

    std::size_t dims_ = 0;
    std::size_t n_ = 0;
    double sigma_ = 1.0;
    bool has_data_ = true;
    std::vector<std::vector<double>> columns_;
    SuffStats stats_;
};

}  // namespace partsel
