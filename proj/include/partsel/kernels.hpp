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
#include <span>
#include <string_view>

namespace partsel::kernels {

enum class Backend { scalar, avx2 };

/// Backend chosen at startup (best the CPU supports). Overridable for tests.
Backend active_backend() noexcept;
bool backend_available(Backend b) noexcept;
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

/// Compensated (Neumaier) sum.
double sum(std::span<const double> x) noexcept;

/// Compensated sum of squared deviations from `center`.
double sum_sq_dev(std::span<const double> x, double center) noexcept;

/// out[j] = (x[2j] + x[2j+1]) / 2. Requires x.size() even, out.size() == x.size()/2.
void pair_bin(std::span<const double> x, std::span<double> out);

namespace scalar {
double sum(std::span<const double> x) noexcept;
double sum_sq_dev(std::span<const double> x, double center) noexcept;
void pair_bin(std::span<const double> x, std::span<double> out) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(std::span<const double> x) noexcept;
double sum_sq_dev(std::span<const double> x, double center) noexcept;
void pair_bin(std::span<const double> x, std::span<double> out) noexcept;
}  // namespace avx2
#endif

}  // namespace partsel::kernels
