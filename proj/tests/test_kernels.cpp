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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "partsel/kernels.hpp"
#include "partsel/rng.hpp"

using namespace partsel;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, bool mixed_scales) {
    RngStream rs(seed);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = 20.0 * rs.next_double() - 10.0;
        if (mixed_scales && (rs.next_u64() & 3u) == 0) x *= 1e8;
        if (mixed_scales && (rs.next_u64() & 3u) == 1) x *= 1e-8;
        v[i] = x;
    }
    return v;
}

}  // namespace

TEST_CASE("scalar kernels against long-double reference") {
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 17u, 128u, 1000u}) {
        auto v = random_values(n, 100 + n, true);
        auto ref = oracle::naive_stats(v);
        long double ref_sum = ref.mean * static_cast<long double>(n);
        double s = kernels::scalar::sum(v);
        CHECK(std::abs(s - static_cast<double>(ref_sum)) <= 1e-9 * (1.0 + std::abs(static_cast<double>(ref_sum))));
        if (n > 0) {
            double m = s / static_cast<double>(n);
            double sse = kernels::scalar::sum_sq_dev(v, m);
            CHECK(sse == doctest::Approx(static_cast<double>(ref.sse)).epsilon(1e-12));
        }
    }
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
#if defined(__x86_64__) || defined(_M_X64)
    if (!kernels::backend_available(kernels::Backend::avx2)) return;
    for (std::size_t n : {0u, 1u, 4u, 7u, 8u, 9u, 63u, 64u, 1023u, 4096u}) {
        auto v = random_values(n, 7 * n + 3, true);
        double a = kernels::scalar::sum(v);
        double b = kernels::avx2::sum(v);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
        double center = n ? v[0] : 0.0;
        double sa = kernels::scalar::sum_sq_dev(v, center);
        double sb = kernels::avx2::sum_sq_dev(v, center);
        CHECK(std::abs(sa - sb) <= 1e-12 * (1.0 + std::abs(sa)));
        if (n % 2 == 0) {
            std::vector<double> oa(n / 2), ob(n / 2);
            kernels::scalar::pair_bin(v, oa);
            kernels::avx2::pair_bin(v, ob);
            CHECK(oa == ob);  // exact: same pairwise means
        }
    }
#endif
}

TEST_CASE("compensated sum beats naive accumulation on adversarial data") {
    std::vector<double> v;
    for (int i = 0; i < 2000; ++i) {
        v.push_back(1e16);
        v.push_back(1.0);
        v.push_back(-1e16);
    }
    CHECK(kernels::scalar::sum(v) == doctest::Approx(2000.0).epsilon(1e-12));
#if defined(__x86_64__) || defined(_M_X64)
    if (kernels::backend_available(kernels::Backend::avx2)) CHECK(kernels::avx2::sum(v) == doctest::Approx(2000.0).epsilon(1e-12));
#endif
}

TEST_CASE("pair_bin semantics and validation") {
    std::vector<double> v{1.0, 3.0, -2.0, 6.0};
    std::vector<double> out(2);
    kernels::pair_bin(v, out);
    CHECK(out[0] == 2.0);
    CHECK(out[1] == 2.0);
    std::vector<double> bad(3);
    CHECK_THROWS_AS(kernels::pair_bin(v, bad), std::invalid_argument);
}

TEST_CASE("backend dispatch") {
    auto original = kernels::active_backend();
    CHECK(kernels::backend_available(kernels::Backend::scalar));
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(kernels::sum(v) == 6.0);
    if (kernels::backend_available(kernels::Backend::avx2)) {
        kernels::set_backend(kernels::Backend::avx2);
        CHECK(kernels::backend_name(kernels::active_backend()) == "avx2");
        CHECK(kernels::sum(v) == 6.0);
    }
    kernels::set_backend(original);
}
