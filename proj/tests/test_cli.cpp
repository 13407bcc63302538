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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "partsel/criteria.hpp"
#include "partsel/samples.hpp"

using nlohmann::json;

namespace {

const std::string cli = PARTSEL_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    std::string out_path = "cli_out_" + std::to_string(counter++) + ".tmp";
    std::string cmd = cli + " " + args + " > " + out_path + " 2> " + out_path + ".err";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    std::remove(out_path.c_str());
    std::remove((out_path + ".err").c_str());
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("exit codes: validation vs numeric-domain errors") {
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("criteria --input missing.csv").exit_code == 2);  // missing --sigma
    write_file("cli_zero.csv", "0.0\n0.0\n0.0\n0.0\n");
    // improper-prior evidence is the Bartlett limit: numeric-domain error
    CHECK(run("evidence --input cli_zero.csv --sigma 1 --improper").exit_code == 3);
    CHECK(run("evidence --input cli_zero.csv --sigma 1 --tau 1").exit_code == 0);
    // tau and improper are mutually exclusive
    CHECK(run("evidence --input cli_zero.csv --sigma 1 --tau 1 --improper").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    std::remove("cli_zero.csv");
}

TEST_CASE("criteria: a dataset centered at zero selects the null under every criterion") {
    std::ostringstream data;
    for (int i = 0; i < 16; ++i) data << (i % 2 == 0 ? 0.5 : -0.5) << "\n";  // mean exactly zero
    write_file("cli_sym.csv", data.str());
    RunResult r = run("criteria --input cli_sym.csv --sigma 1 --tau 10 --nu 0.001");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    for (auto& [criterion, label] : j["selected"].items()) CHECK(label.get<std::string>() == "K0");
    CHECK(j["reports"].size() > 0);
    std::remove("cli_sym.csv");
}

TEST_CASE("criteria: JSON round-trips to identical values") {
    write_file("cli_rt.csv", "1.25\n-0.5\n0.75\n2.0\n-1.25\n0.5\n");
    RunResult r = run("criteria --input cli_rt.csv --sigma 0.8 --tau 3 --n-train 4 --n-gen 2 --seed 99");
    REQUIRE(r.exit_code == 0);
    json first = json::parse(r.out);
    // re-serialize and re-parse: every double must round-trip exactly
    json second = json::parse(first.dump());
    CHECK(first == second);
    // and the values match an in-process recomputation bit for bit
    partsel::SampleSet data = partsel::SampleSet::from_csv("cli_rt.csv", 0.8);
    partsel::CriterionReport expect =
        partsel::aic(data, partsel::GaussianModel::nested(1, 1), "K1");
    bool found = false;
    for (const auto& rep : first["reports"]) {
        if (rep["criterion_id"] == "AIC" && rep["model_id"] == "K1") {
            CHECK(rep["value"].get<double>() == expect.value);
            found = true;
        }
    }
    CHECK(found);
    std::remove("cli_rt.csv");
}

TEST_CASE("figures fig2: 61 rows, complexity strictly increasing") {
    RunResult r = run("figures fig2 --k 1 --nu-grid log:1e-3:1e3:61");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 62);  // header + 61 rows
    CHECK(lines[0] == "nu,complexity");
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        double nu, c;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf", &nu, &c) == 2);
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("figures fig3: alpha decreasing; resolution table well formed") {
    RunResult r = run("figures fig3 --dk 2 --nu-grid log:1e-2:1e2:21");
    REQUIRE(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 22);
    CHECK(lines[0] == "nu,alpha");
    double prev = 2.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        double nu, a;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf", &nu, &a) == 2);
        CHECK(a < prev);
        prev = a;
    }

    RunResult res = run("resolution --sigma 1 --n-grid 10,100,1000 --tau 10,100");
    REQUIRE(res.exit_code == 0);
    auto rl = lines_of(res.out);
    REQUIRE(rl.size() == 4);
    CHECK(rl[0] == "n,threshold_freq,threshold_bayes_tau0,threshold_bayes_tau1,ratio_tau0,ratio_tau1");
}

TEST_CASE("paradox: witness verifies and re-runs identically") {
    RunResult a = run("paradox --confidence 0.95 --posterior 0.95");
    RunResult b = run("paradox --confidence 0.95 --posterior 0.95");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    json j = json::parse(a.out);
    CHECK(j["witness"]["p_two_sided"].get<double>() <= 0.0455);
    CHECK(j["witness"]["posterior_null"].get<double>() >= 0.95);
    CHECK(j["checks"]["posterior_null_met"].get<bool>());
}

TEST_CASE("simulate: reports carry the config echo and seed") {
    RunResult r = run("simulate --experiment binning --mu 0.05 --n-grid 100 --replicates 50 --seed 7 --threads 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["experiment"] == "binning");
    CHECK(j["config"]["seed"].get<std::uint64_t>() == 7);
    CHECK(j["config"]["replicates"].get<std::size_t>() == 50);
    CHECK(j["results"]["aic_flip_rate"]["value"].get<double>() == 0.0);
}

TEST_CASE("simulate: unknown experiment is a validation error") {
    CHECK(run("simulate --experiment nope").exit_code == 2);
}

TEST_CASE("config file supplies defaults, flags override") {
    write_file("cli_cfg.ini", "[simulate]\nexperiment=loss-singleton\nreplicates=20\nmu=0.3\nn-grid=40\nseed=5\n");
    RunResult r = run("--config cli_cfg.ini simulate");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["config"]["replicates"].get<std::size_t>() == 20);
    CHECK(j["results"]["all_exactly_one"].get<bool>());
    RunResult over = run("--config cli_cfg.ini simulate --replicates 30");
    json j2 = json::parse(over.out);
    CHECK(j2["config"]["replicates"].get<std::size_t>() == 30);
    std::remove("cli_cfg.ini");
}

TEST_CASE("output file writing") {
    RunResult r = run("significance --dk 1 --nu-grid 0.5,1,2 --output cli_sig.csv");
    REQUIRE(r.exit_code == 0);
    std::string contents = slurp("cli_sig.csv");
    CHECK(lines_of(contents).size() == 4);
    std::remove("cli_sig.csv");
}
