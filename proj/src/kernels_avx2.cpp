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

// AVX2 variants of the reduction kernels. Four Neumaier accumulator lanes,
// combined in fixed lane order so results are reproducible run to run.

#include "partsel/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace partsel::kernels::avx2 {

namespace {

struct ScalarNeumaier {
    double acc = 0.0, comp = 0.0;
    void add(double v) noexcept {
        double t = acc + v;
        comp += (std::abs(acc) >= std::abs(v)) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    }
    double result() const noexcept { return acc + comp; }
};

inline __m256d abs_pd(__m256d v) noexcept { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

}  // namespace

double sum(std::span<const double> x) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    __m256d acc = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        __m256d t = _mm256_add_pd(acc, v);
        __m256d mask = _mm256_cmp_pd(abs_pd(acc), abs_pd(v), _CMP_GE_OQ);
        __m256d big = _mm256_blendv_pd(v, acc, mask);
        __m256d small = _mm256_blendv_pd(acc, v, mask);
        comp = _mm256_add_pd(comp, _mm256_add_pd(_mm256_sub_pd(big, t), small));
        acc = t;
    }
    alignas(32) double la[4], lc[4];
    _mm256_store_pd(la, acc);
    _mm256_store_pd(lc, comp);
    ScalarNeumaier s;
    for (int k = 0; k < 4; ++k) s.add(la[k]);
    for (int k = 0; k < 4; ++k) s.add(lc[k]);
    for (; i < n; ++i) s.add(p[i]);
    return s.result();
}

double sum_sq_dev(std::span<const double> x, double center) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
        __m256d sq = _mm256_mul_pd(d, d);
        __m256d t = _mm256_add_pd(acc, sq);
        // squares are non-negative, so the magnitude test is a plain compare
        __m256d mask = _mm256_cmp_pd(acc, sq, _CMP_GE_OQ);
        __m256d big = _mm256_blendv_pd(sq, acc, mask);
        __m256d small = _mm256_blendv_pd(acc, sq, mask);
        comp = _mm256_add_pd(comp, _mm256_add_pd(_mm256_sub_pd(big, t), small));
        acc = t;
    }
    alignas(32) double la[4], lc[4];
    _mm256_store_pd(la, acc);
    _mm256_store_pd(lc, comp);
    ScalarNeumaier s;
    for (int k = 0; k < 4; ++k) s.add(la[k]);
    for (int k = 0; k < 4; ++k) s.add(lc[k]);
    for (; i < n; ++i) {
        double d = p[i] - center;
        s.add(d * d);
    }
    return s.result();
}

void pair_bin(std::span<const double> x, std::span<double> out) noexcept {
    const double* p = x.data();
    const std::size_t n = x.size();
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d a = _mm256_loadu_pd(p + i);
        __m256d b = _mm256_loadu_pd(p + i + 4);
        __m256d h = _mm256_hadd_pd(a, b);  // [a0+a1, b0+b1, a2+a3, b2+b3]
        __m256d r = _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
        _mm256_storeu_pd(out.data() + i / 2, _mm256_mul_pd(r, half));
    }
    for (; i + 2 <= n; i += 2) out[i / 2] = 0.5 * (p[i] + p[i + 1]);
}

}  // namespace partsel::kernels::avx2

#endif  // x86_64
