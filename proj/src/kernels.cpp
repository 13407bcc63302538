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

#include "partsel/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace partsel::kernels {

namespace scalar {

double sum(std::span<const double> x) noexcept {
    double acc = 0.0, comp = 0.0;
    for (double v : x) {
        double t = acc + v;
        comp += (std::abs(acc) >= std::abs(v)) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    }
    return acc + comp;
}

double sum_sq_dev(std::span<const double> x, double center) noexcept {
    double acc = 0.0, comp = 0.0;
    for (double v : x) {
        double d = v - center;
        double sq = d * d;
        double t = acc + sq;
        comp += (acc >= sq) ? (acc - t) + sq : (sq - t) + acc;
        acc = t;
    }
    return acc + comp;
}

void pair_bin(std::span<const double> x, std::span<double> out) noexcept {
    const std::size_t m = x.size() / 2;
    for (std::size_t j = 0; j < m; ++j) out[j] = 0.5 * (x[2 * j] + x[2 * j + 1]);
}

}  // namespace scalar

namespace {

Backend pick_default() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

std::atomic<Backend> g_backend{pick_default()};

}  // namespace

Backend active_backend() noexcept { return g_backend.load(std::memory_order_relaxed); }

bool backend_available(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

void set_backend(Backend b) {
    if (!backend_available(b)) throw std::invalid_argument("kernels: requested backend not available on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double sum(std::span<const double> x) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) return avx2::sum(x);
#endif
    return scalar::sum(x);
}

double sum_sq_dev(std::span<const double> x, double center) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) return avx2::sum_sq_dev(x, center);
#endif
    return scalar::sum_sq_dev(x, center);
}

void pair_bin(std::span<const double> x, std::span<double> out) {
    if (x.size() % 2 != 0) throw std::invalid_argument("pair_bin: input size must be even");
    if (out.size() != x.size() / 2) throw std::invalid_argument("pair_bin: output size must be input/2");
#if defined(__x86_64__) || defined(_M_X64)
    if (active_backend() == Backend::avx2) {
        avx2::pair_bin(x, out);
        return;
    }
#endif
    scalar::pair_bin(x, out);
}

}  // namespace partsel::kernels
