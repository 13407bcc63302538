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

namespace partsel::special {

/// Regularized lower incomplete gamma P(a, x). Series for x < a+1, Lentz
/// continued fraction otherwise; relative accuracy ~1e-14 for a, x <= 1e3.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Chi-squared CDF / survival with k degrees of freedom.
double chi2_cdf(double k, double x);
double chi2_sf(double k, double x);

/// Standard normal CDF / survival.
double normal_cdf(double z);
double normal_sf(double z);

/// Two-sided tail probability of a |z|-score under the standard normal.
double two_sided_p(double z);

/// Inverse of two_sided_p on z >= 0 (bisection).
double two_sided_z(double p);

}  // namespace partsel::special
