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

#include <ostream>
#include <string>
#include <vector>

namespace partsel {

/// Tabular curve data with declared column headers. CSV output is full
/// double precision (17 significant digits) for machine consumption.
struct Curve {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write_csv(std::ostream& os) const;
    [[nodiscard]] std::string to_csv() const;
};

/// Full-precision decimal rendering of a double (%.17g).
std::string format_double(double v);

}  // namespace partsel
