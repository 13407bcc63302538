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

#include "partsel/samples.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "partsel/kernels.hpp"

namespace partsel {

namespace {

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("SampleSet: sigma must be positive and finite");
}

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    for (auto& tok : out) {
        auto first = tok.find_first_not_of(" \t\r");
        auto last = tok.find_last_not_of(" \t\r");
        tok = (first == std::string::npos) ? std::string() : tok.substr(first, last - first + 1);
    }
    return out;
}

}  // namespace

SuffStats complement_stats(const SuffStats& whole, const SuffStats& part) {
    if (part.n > whole.n) throw std::invalid_argument("complement_stats: subset larger than whole");
    if (part.mean.size() != whole.mean.size()) throw std::invalid_argument("complement_stats: dimension mismatch");
    const std::size_t d = whole.mean.size();
    SuffStats rest;
    rest.n = whole.n - part.n;
    rest.mean.assign(d, 0.0);
    rest.sse.assign(d, 0.0);
    if (rest.n == 0) return rest;
    const double nw = static_cast<double>(whole.n);
    const double np = static_cast<double>(part.n);
    const double nr = static_cast<double>(rest.n);
    for (std::size_t k = 0; k < d; ++k) {
        rest.mean[k] = (nw * whole.mean[k] - np * part.mean[k]) / nr;
        double gap = part.mean[k] - rest.mean[k];
        double sse = whole.sse[k] - part.sse[k] - (np * nr / nw) * gap * gap;
        rest.sse[k] = std::max(sse, 0.0);
    }
    return rest;
}

SampleSet::SampleSet(std::size_t dims, double sigma) : dims_(dims), sigma_(sigma), columns_(dims) {
    if (dims == 0) throw std::invalid_argument("SampleSet: need at least one coordinate");
    check_sigma(sigma);
    stats_.mean.assign(dims, 0.0);
    stats_.sse.assign(dims, 0.0);
}

SampleSet SampleSet::from_columns(std::vector<std::vector<double>> columns, double sigma) {
    if (columns.empty()) throw std::invalid_argument("SampleSet: need at least one coordinate");
    SampleSet s(columns.size(), sigma);
    const std::size_t n = columns.front().size();
    for (const auto& col : columns)
        if (col.size() != n) throw std::invalid_argument("SampleSet: ragged columns");
    s.columns_ = std::move(columns);
    s.n_ = n;
    s.stats_ = s.recomputed_stats();
    return s;
}

SampleSet SampleSet::from_rows(const std::vector<std::vector<double>>& rows, std::size_t dims, double sigma) {
    std::vector<std::vector<double>> cols(dims);
    for (auto& c : cols) c.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.size() != dims) throw std::invalid_argument("SampleSet: row width does not match dims");
        for (std::size_t k = 0; k < dims; ++k) cols[k].push_back(row[k]);
    }
    return from_columns(std::move(cols), sigma);
}

SampleSet SampleSet::from_data(std::span<const double> values, double sigma) {
    std::vector<std::vector<double>> cols(1);
    cols[0].assign(values.begin(), values.end());
    return from_columns(std::move(cols), sigma);
}

SampleSet SampleSet::from_stats(std::size_t n, std::vector<double> mean, std::vector<double> sse, double sigma) {
    if (mean.size() != sse.size() || mean.empty()) throw std::invalid_argument("SampleSet::from_stats: mean/sse size mismatch");
    for (double s : sse)
        if (s < 0.0) throw std::invalid_argument("SampleSet::from_stats: sse must be non-negative");
    SampleSet s(mean.size(), sigma);
    s.n_ = n;
    s.has_data_ = false;
    s.columns_.clear();
    s.stats_.n = n;
    s.stats_.mean = std::move(mean);
    s.stats_.sse = std::move(sse);
    if (n == 0) {
        s.stats_.mean.assign(s.dims_, 0.0);
        s.stats_.sse.assign(s.dims_, 0.0);
    }
    return s;
}

SampleSet SampleSet::from_csv(const std::string& path, double sigma) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("SampleSet::from_csv: cannot open '" + path + "'");
    std::string line;
    std::vector<std::vector<double>> rows;
    std::size_t dims = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto toks = split_csv_line(line);
        std::vector<double> row(toks.size());
        bool numeric = true;
        for (std::size_t k = 0; k < toks.size(); ++k)
            if (!parse_double(toks[k], row[k])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (first_content_line) {  // header
                first_content_line = false;
                dims = toks.size();
                continue;
            }
            throw std::invalid_argument("SampleSet::from_csv: non-numeric value outside header in '" + path + "'");
        }
        if (dims == 0) dims = row.size();
        if (row.size() != dims) throw std::invalid_argument("SampleSet::from_csv: inconsistent column count in '" + path + "'");
        rows.push_back(std::move(row));
        first_content_line = false;
    }
    if (dims == 0) throw std::invalid_argument("SampleSet::from_csv: no columns found in '" + path + "'");
    return from_rows(rows, dims, sigma);
}

const std::vector<double>& SampleSet::column(std::size_t k) const {
    require_data("column");
    return columns_.at(k);
}

void SampleSet::require_data(const char* op) const {
    if (!has_data_) throw std::logic_error(std::string("SampleSet::") + op + ": raw observations are not available (stats-only set)");
}

void SampleSet::append(std::span<const double> row) {
    require_data("append");
    if (row.size() != dims_) throw std::invalid_argument("SampleSet::append: row width does not match dims");
    ++n_;
    stats_.n = n_;
    const double n = static_cast<double>(n_);
    for (std::size_t k = 0; k < dims_; ++k) {
        columns_[k].push_back(row[k]);
        double delta = row[k] - stats_.mean[k];
        stats_.mean[k] += delta / n;
        stats_.sse[k] += delta * (row[k] - stats_.mean[k]);
    }
}

void SampleSet::remove_last() {
    require_data("remove_last");
    if (n_ == 0) throw std::logic_error("SampleSet::remove_last: empty set");
    const double n = static_cast<double>(n_);
    for (std::size_t k = 0; k < dims_; ++k) {
        double x = columns_[k].back();
        columns_[k].pop_back();
        if (n_ == 1) {
            stats_.mean[k] = 0.0;
            stats_.sse[k] = 0.0;
        } else {
            double prev_mean = (n * stats_.mean[k] - x) / (n - 1.0);
            stats_.sse[k] = std::max(stats_.sse[k] - (x - stats_.mean[k]) * (x - prev_mean), 0.0);
            stats_.mean[k] = prev_mean;
        }
    }
    --n_;
    stats_.n = n_;
}

SuffStats SampleSet::subset_stats(std::span<const std::uint32_t> indices) const {
    require_data("subset_stats");
    SuffStats out;
    out.n = indices.size();
    out.mean.assign(dims_, 0.0);
    out.sse.assign(dims_, 0.0);
    if (indices.empty()) return out;
    std::vector<double> buf(indices.size());
    for (std::size_t k = 0; k < dims_; ++k) {
        const auto& col = columns_[k];
        for (std::size_t i = 0; i < indices.size(); ++i) buf[i] = col[indices[i]];
        double m = kernels::sum(buf) / static_cast<double>(indices.size());
        out.mean[k] = m;
        out.sse[k] = kernels::sum_sq_dev(buf, m);
    }
    return out;
}

SuffStats SampleSet::recomputed_stats() const {
    require_data("recomputed_stats");
    SuffStats out;
    out.n = n_;
    out.mean.assign(dims_, 0.0);
    out.sse.assign(dims_, 0.0);
    if (n_ == 0) return out;
    for (std::size_t k = 0; k < dims_; ++k) {
        double m = kernels::sum(columns_[k]) / static_cast<double>(n_);
        out.mean[k] = m;
        out.sse[k] = kernels::sum_sq_dev(columns_[k], m);
    }
    return out;
}

SampleSet SampleSet::binned_pairs() const {
    require_data("binned_pairs");
    if (n_ % 2 != 0) throw std::invalid_argument("SampleSet::binned_pairs: requires even N");
    std::vector<std::vector<double>> cols(dims_);
    for (std::size_t k = 0; k < dims_; ++k) {
        cols[k].resize(n_ / 2);
        kernels::pair_bin(columns_[k], cols[k]);
    }
    return from_columns(std::move(cols), sigma_ / std::sqrt(2.0));
}

}  // namespace partsel
