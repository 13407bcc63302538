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
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace partsel {

/// Splittable counter-style random stream. A stream is identified by a 64-bit
/// key; `derive` folds extra words into the key to spawn an independent child
/// stream without consuming state from the parent. Keying experiments by
/// (seed, experiment, cell, replicate) makes results independent of how
/// replicates are scheduled across workers.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) noexcept : state_(mix(seed ^ 0x6A09E667F3BCC909ull)) {}

    [[nodiscard]] RngStream derive(std::initializer_list<std::uint64_t> words) const noexcept {
        std::uint64_t k = state_;
        for (std::uint64_t w : words) k = mix(k ^ mix(w + 0x9E3779B97F4A7C15ull));
        RngStream child(0);
        child.state_ = k;
        child.has_spare_ = false;
        return child;
    }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe under log().
    double next_open() noexcept { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the sine partner is cached.
    double next_normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_open();
        double u2 = next_double();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, bound), unbiased (rejection).
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = (UINT64_MAX / bound) * bound;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline constexpr std::uint64_t kDefaultSeed = 1729;
inline constexpr std::uint64_t kDefaultBudget = 100000;

}  // namespace partsel
