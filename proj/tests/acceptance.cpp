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

// Acceptance suite: end-to-end checks with pinned tolerances, one verdict
// line per criterion. Exit code is the number of failed criteria.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracle.hpp"
#include "partsel/analysis.hpp"
#include "partsel/criteria.hpp"
#include "partsel/gaussian.hpp"
#include "partsel/rng.hpp"
#include "partsel/samples.hpp"
#include "partsel/simulate.hpp"
#include "partsel/special.hpp"

using namespace partsel;

namespace {

int g_failures = 0;
const unsigned kThreads = 2;

void verdict(int idx, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%2d] %s %s  (%s)\n", idx, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------- 1

void criterion_1() {
    bool aic_limit_ok = true;
    for (int k : {1, 2, 5}) aic_limit_ok &= std::abs(complexity_nu(k, 1e-6) - k) <= 1e-5;

    const double n = 1e6;
    double ratio = complexity_nu(1, n - 1.0) / (0.5 * std::log(n));
    bool bic_band_ok = ratio >= 1.0 && ratio <= 1.05;
    // diagnostics: the ratio is 1 + 1/log N + 1/(N-1) identically; the band
    // as stated holds only for N >= ~7.4e8, or for the penalty without the
    // (K/2) fit-bias term, whose ratio is 1 + 1/(N-1)
    double ratio_1e9 = complexity_nu(1, 1e9 - 1.0) / (0.5 * std::log(1e9));
    double ratio_no_bias = (complexity_nu(1, n - 1.0) - 0.5) / (0.5 * std::log(n));

    verdict(1, aic_limit_ok && bic_band_ok, "complexity limits",
            fmt("|K_nu(1e-6)-K| ok=%d; ratio@nu=N-1,N=1e6 = %.6f in [1,1.05]=%d "
                "[diagnostic: same ratio at N=1e9 = %.6f; without the K/2 bias term = %.6f]",
                aic_limit_ok ? 1 : 0, ratio, bic_band_ok ? 1 : 0, ratio_1e9, ratio_no_bias));
}

// ---------------------------------------------------------------- 2

void criterion_2() {
    RngStream rs(20240401);
    GaussianModel model = GaussianModel::all_free(1);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::size_t n = 1 + rs.next_below(100);
        double tau = std::pow(10.0, -1.0 + 3.0 * rs.next_double());
        std::vector<double> data(n);
        for (auto& x : data) x = 10.0 * (2.0 * rs.next_double() - 1.0);
        SampleSet s = SampleSet::from_data(data, 1.0);
        double closed = log_evidence(s, model, PriorSpec::normal(tau));
        double quad = oracle::log_evidence_quadrature(data, 1.0, tau);
        worst = std::max(worst, std::abs(closed - quad));
    }
    verdict(2, worst <= 1e-8, "evidence vs quadrature oracle", fmt("max |diff| = %.3e over 1000 cases", worst));
}

// ---------------------------------------------------------------- 3

void criterion_3() {
    RngStream rs(777);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        std::size_t n = 2 + rs.next_below(199);
        std::vector<double> data(n);
        for (auto& x : data) x = 10.0 * (2.0 * rs.next_double() - 1.0);
        SampleSet s = SampleSet::from_data(data, 1.0);
        std::size_t cut = 1 + rs.next_below(n - 1);
        std::vector<std::uint32_t> a, b;
        for (std::uint32_t i = 0; i < n; ++i) (i < cut ? a : b).push_back(i);
        SuffStats sa = s.subset_stats(a);
        SuffStats sb = s.subset_stats(b);
        double gap = sa.mean[0] - sb.mean[0];
        double lhs = s.sse(0) - sa.sse[0] - sb.sse[0];
        double rhs = (static_cast<double>(a.size()) * static_cast<double>(b.size()) / static_cast<double>(n)) * gap * gap;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, s.sse(0)));
    }
    verdict(3, worst <= 1e-10, "squared-deviation split identity", fmt("max scaled residual = %.3e over 10^4 splits", worst));
}

// ---------------------------------------------------------------- 4

void criterion_4() {
    sim::ExperimentConfig cfg;
    cfg.true_mean = {0.0};
    cfg.sigma = 1.0;
    cfg.n_grid = {100};
    cfg.nu_grid = {0.0, 0.1, 1.0, 10.0};
    cfg.replicates = 100000;
    cfg.seed = 424242;
    sim::ExperimentReport rep = sim::unbiasedness_experiment(cfg, kThreads);
    double max_z = rep.results["max_abs_z"].get<double>();
    verdict(4, max_z < 3.0, "IC^nu unbiasedness, K in {0,1}, N=100",
            fmt("max |z| = %.3f over %zu cells at 1e5 replicates", max_z, rep.results["cells"].size()));
}

// ---------------------------------------------------------------- 5

void criterion_5() {
    double a2 = significance_level(2, 0.0);
    bool exact2 = std::abs(a2 - std::exp(-2.0)) <= 1e-10;
    double a1 = significance_level(1, 0.0);
    double oracle1 = std::erfc(1.0);  // chi2_1 survival at 2, closed form
    bool exact1 = std::abs(a1 - 0.157299) <= 1e-6 && std::abs(a1 - oracle1) <= 1e-12;
    bool decreasing = true;
    double prev = 2.0;
    for (int i = 0; i < 61; ++i) {
        double nu = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
        double a = significance_level(2, nu);
        decreasing &= a < prev;
        prev = a;
    }
    verdict(5, exact2 && exact1 && decreasing, "significance levels",
            fmt("alpha(2,0)=%.12f vs e^-2; alpha(1,0)=%.9f vs %.9f; strictly decreasing=%d", a2, a1, oracle1,
                decreasing ? 1 : 0));
}

// ---------------------------------------------------------------- 6

void criterion_6() {
    std::string out_path = "acceptance_paradox.json";
    std::string cmd = std::string(PARTSEL_CLI_PATH) + " paradox --confidence 0.95 --posterior 0.95 --output " + out_path +
                      " 2> /dev/null";
    int status = std::system(cmd.c_str());
    bool ran = WIFEXITED(status) && WEXITSTATUS(status) == 0;
    bool checks = false;
    double p = 1.0, post = 0.0;
    if (ran) {
        std::ifstream in(out_path);
        nlohmann::json j = nlohmann::json::parse(in);
        double z = j["witness"]["z"].get<double>();
        double tau = j["witness"]["tau"].get<double>();
        double mu_hat = j["witness"]["mu_hat"].get<double>();
        auto n = j["witness"]["n"].get<std::size_t>();
        // independent re-verification: p from the normal tail, posterior
        // through the exact evidence path on a reconstructed witness
        p = std::erfc(z / std::numbers::sqrt2_v<double>);
        SampleSet witness = SampleSet::from_stats(n, {mu_hat}, {static_cast<double>(n - 1)}, 1.0);
        BayesFactor bf = log_bayes_factor(witness, GaussianModel::null_at_zero(1), GaussianModel::all_free(1),
                                          PriorSpec::normal(tau), PriorSpec::normal(tau));
        post = bf.posterior_model0;
        checks = p <= 0.0455 && post >= 0.95;
    }
    std::remove(out_path.c_str());
    verdict(6, ran && checks, "Lindley witness via the CLI",
            fmt("exit ok=%d; reverified p=%.6f <= 0.0455, posterior=%.6f >= 0.95", ran ? 1 : 0, p, post));
}

// ---------------------------------------------------------------- 7

void criterion_7() {
    const std::size_t n = 1000;
    sim::ExperimentConfig cfg;
    double sigma_mu = 1.0 / std::sqrt(static_cast<double>(n));
    cfg.true_mean = {sigma_mu * std::sqrt(std::log(static_cast<double>(n)))};
    cfg.sigma = 1.0;
    cfg.n_grid = {n};
    cfg.replicates = 10000;
    cfg.seed = 20250101;
    sim::ExperimentReport rep = sim::binning_experiment(cfg, kThreads);
    double aic_rate = rep.results["aic_flip_rate"]["value"].get<double>();
    double shift_dev = rep.results["bic_penalty_shift_max_abs_dev"].get<double>();
    double bic_rate = rep.results["bic_flip_rate"]["value"].get<double>();
    bool ok = aic_rate == 0.0 && shift_dev <= 1e-12 && bic_rate >= 0.05;
    verdict(7, ok, "pair binning",
            fmt("AIC flip rate = %g (exactly 0); BIC shift dev = %.2e (vs (K/2)ln2); BIC flip rate = %.4f >= 0.05",
                aic_rate, shift_dev, bic_rate));
}

// ---------------------------------------------------------------- 8

void criterion_8() {
    sim::ExperimentConfig cfg;
    cfg.true_mean = {0.0};
    cfg.tau = 10.0;
    cfg.replicates = 2000;
    cfg.seed = 606060;
    sim::DerivativeCheck chk = sim::derivative_check(cfg, 1000, kThreads);
    bool deriv_ok = chk.relative_error <= 0.10;

    // missing information against the parameter information at tau = 1e3
    GaussianModel alt = GaussianModel::all_free(1);
    PriorSpec prior = PriorSpec::normal(1000.0);
    RngStream root(515151);
    auto mean_info = [&](std::size_t n, double& info_mean, double& missing_mean) {
        std::vector<double> infos(2000), missing(2000);
        for (std::size_t i = 0; i < infos.size(); ++i) {
            RngStream rs = root.derive({n, i});
            SampleSet s = sim::generate_dataset(std::vector<double>{0.0}, 1.0, n, 1, rs);
            infos[i] = parameter_information(s, alt, prior);
            missing[i] = missing_information(s, alt, prior, kDefaultBudget, 1);
        }
        info_mean = sim::mean_se(infos).value;
        missing_mean = sim::mean_se(missing).value;
    };
    double i_100, ip_100, i_1000, ip_1000;
    mean_info(100, i_100, ip_100);
    mean_info(1000, i_1000, ip_1000);
    bool gap_ok = std::abs(ip_1000 - i_1000) <= 2.0;
    bool grows_ok = i_1000 > i_100 + 0.5;  // one decade of N adds about log(10)/2
    verdict(8, deriv_ok && gap_ok && grows_ok, "derivative heuristic and missing information",
            fmt("rel err = %.4f <= 0.10; |I' - I| = %.3f <= 2 at N=1000 (I = %.3f); I grows %.3f -> %.3f",
                chk.relative_error, std::abs(ip_1000 - i_1000), i_1000, i_100, i_1000));
}

// ---------------------------------------------------------------- 9

void criterion_9() {
    sim::ExperimentConfig cfg;
    cfg.true_mean = {0.1};
    cfg.sigma = 1.0;
    cfg.tau = 10.0;
    cfg.n_grid.clear();
    for (int p = 0; p <= 20; ++p) cfg.n_grid.push_back(static_cast<std::size_t>(1) << p);
    cfg.replicates = 1000;
    cfg.seed = 909090;
    sim::PrepostResult res = sim::figure_prepost(cfg, kThreads);
    bool have = res.pred_crossing_idx.has_value() && res.post_crossing_idx.has_value();
    bool order_ok = have && *res.pred_crossing_idx < *res.post_crossing_idx;
    bool dip_ok = false;
    long gap = 99;
    if (have) {
        gap = static_cast<long>(*res.pred_crossing_idx) - static_cast<long>(res.post_argmin_idx);
        dip_ok = std::labs(gap) <= 1;
    }
    verdict(9, order_ok && dip_ok, "pre/postdictive decision curves",
            fmt("pred crossing idx=%zd, post crossing idx=%zd, post argmin idx=%zu, |gap|=%ld <= 1",
                have ? static_cast<long>(*res.pred_crossing_idx) : -1,
                have ? static_cast<long>(*res.post_crossing_idx) : -1, res.post_argmin_idx, gap));
}

// ---------------------------------------------------------------- 10

void criterion_10() {
    sim::ExperimentConfig singleton;
    singleton.true_mean = {0.5};
    singleton.n_grid = {100};
    singleton.replicates = 2000;
    singleton.seed = 111;
    sim::ExperimentReport s_rep = sim::loss_ratio_experiment(singleton, sim::LossScenario::singleton, kThreads);
    bool singleton_ok = s_rep.results["all_exactly_one"].get<bool>();

    sim::ExperimentConfig nested;
    nested.true_mean = {0.0};
    nested.tau = 1.0;
    nested.n_grid = {10000};
    nested.replicates = 10000;
    nested.seed = 222;
    sim::ExperimentReport n_rep = sim::loss_ratio_experiment(nested, sim::LossScenario::nested_null, kThreads);
    double aic_rate = n_rep.results["aic_over_selection_rate"]["value"].get<double>();
    double bic_rate = n_rep.results["bic_over_selection_rate"]["value"].get<double>();
    bool rates_ok = std::abs(aic_rate - 0.157) <= 0.02 && bic_rate <= 0.02;
    verdict(10, singleton_ok && rates_ok, "loss ratios",
            fmt("singleton eps == 1: %d; AIC over-rate = %.4f (0.157 +/- 0.02); BIC over-rate = %.4f <= 0.02",
                singleton_ok ? 1 : 0, aic_rate, bic_rate));
}

// ---------------------------------------------------------------- 11

void criterion_11() {
    struct Run {
        const char* name;
        const char* args;
    };
    const Run runs[] = {
        {"unbiasedness", "--experiment unbiasedness --mu 0.05 --n-grid 60 --nu-grid 0,1 --replicates 200"},
        {"binning", "--experiment binning --mu 0.08 --n-grid 100 --replicates 200"},
        {"prepost", "--experiment prepost --mu 0.1 --tau 10 --n-grid pow2:0:6 --replicates 100"},
        {"loss-singleton", "--experiment loss-singleton --mu 0.3 --n-grid 40 --replicates 100"},
        {"loss-nested-null", "--experiment loss-nested-null --mu 0 --tau 1 --n-grid 200 --replicates 200"},
        {"loss-offset", "--experiment loss-offset --mu 0.1,0.3 --tau 10 --n-grid 50 --replicates 100"},
        {"true-cross", "--experiment true-cross --mu 0 --tau 2 --n-grid 40 --n-train 20 --n-gen 20 --replicates 300"},
        {"derivative", "--experiment derivative --mu 0 --tau 10 --n 50 --replicates 200"},
    };
    bool all_ok = true;
    std::string detail;
    for (const Run& r : runs) {
        auto run_once = [&](int threads, const std::string& path) {
            std::string cmd = std::string(PARTSEL_CLI_PATH) + " simulate " + r.args + " --seed 4096 --threads " +
                              std::to_string(threads) + " --output " + path + " 2> /dev/null";
            int status = std::system(cmd.c_str());
            return WIFEXITED(status) && WEXITSTATUS(status) == 0;
        };
        bool ok1 = run_once(1, "acc_det_a.json");
        bool ok2 = run_once(2, "acc_det_b.json");
        std::ifstream a("acc_det_a.json", std::ios::binary), b("acc_det_b.json", std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        bool same = ok1 && ok2 && sa.str() == sb.str() && !sa.str().empty();
        if (!same) {
            all_ok = false;
            detail += std::string(r.name) + " differs; ";
        }
        std::remove("acc_det_a.json");
        std::remove("acc_det_b.json");
    }
    if (detail.empty()) detail = "8 experiments byte-identical across 1 vs 2 workers";
    verdict(11, all_ok, "simulate determinism across worker counts", detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite (threads=%u)\n", kThreads);
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("acceptance: %d of 11 criteria failed\n", g_failures);
    return g_failures;
}
