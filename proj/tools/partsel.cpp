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

// partsel: model-selection criteria, resolution analytics, and a seeded
// Monte Carlo harness for partitioned-data inference on Gaussian location
// models. Exit codes: 0 success, 2 validation error, 3 numeric-domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "partsel/analysis.hpp"
#include "partsel/criteria.hpp"
#include "partsel/curves.hpp"
#include "partsel/gaussian.hpp"
#include "partsel/rng.hpp"
#include "partsel/samples.hpp"
#include "partsel/simulate.hpp"
#include "partsel/special.hpp"

using namespace partsel;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string output;
    bool pretty = false;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 0;

    [[nodiscard]] unsigned effective_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--output", opts.output, "Write the artifact to this path (default: stdout)");
    cmd->add_flag("--pretty", opts.pretty, "Human-readable output (indented JSON)");
    cmd->add_option("--seed", opts.seed, "Random seed (fixed default, never time-based)")->capture_default_str();
    cmd->add_option("--budget", opts.budget, "Max subsets for leave-k-out estimators")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = hardware); results do not depend on this");
}

void emit(const CommonOpts& opts, const std::string& text) {
    if (opts.output.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(opts.output, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path '" + opts.output + "'");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void log_config_echo(const ordered_json& echo) { std::cerr << "# config " << echo.dump() << "\n"; }

std::vector<double> parse_real_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
        bool logspace = spec[1] == 'o';
        double lo, hi;
        int count;
        if (std::sscanf(spec.c_str() + 4, "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2)
            throw std::invalid_argument("grid spec must be (log|lin):<lo>:<hi>:<count>, got '" + spec + "'");
        for (int i = 0; i < count; ++i) {
            double t = static_cast<double>(i) / (count - 1);
            out.push_back(logspace ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)))
                                   : lo + t * (hi - lo));
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty grid spec");
    return out;
}

std::vector<std::size_t> parse_count_grid(const std::string& spec) {
    std::vector<std::size_t> out;
    if (spec.rfind("pow2:", 0) == 0) {
        int lo, hi;
        if (std::sscanf(spec.c_str() + 5, "%d:%d", &lo, &hi) != 2 || lo < 0 || hi < lo || hi > 62)
            throw std::invalid_argument("grid spec must be pow2:<lo>:<hi>, got '" + spec + "'");
        for (int p = lo; p <= hi; ++p) out.push_back(static_cast<std::size_t>(1) << p);
        return out;
    }
    for (double v : parse_real_grid(spec)) {
        if (!(v >= 1.0) || !std::isfinite(v)) throw std::invalid_argument("sample-size grid entries must be >= 1");
        auto n = static_cast<std::size_t>(std::llround(v));
        if (out.empty() || out.back() != n) out.push_back(n);
    }
    return out;
}

struct PriorOpts {
    double tau = 0.0;
    bool improper = false;

    [[nodiscard]] PriorSpec prior() const {
        if (improper) return PriorSpec::improper_flat();
        if (!(tau > 0.0)) throw std::invalid_argument("a prior is required: pass --tau <scale> or --improper");
        return PriorSpec::normal(tau);
    }
};

void add_prior(CLI::App* cmd, PriorOpts& p) {
    auto* tau = cmd->add_option("--tau", p.tau, "Prior scale per free coordinate");
    auto* flat = cmd->add_flag("--improper", p.improper, "Use the improper flat prior");
    tau->excludes(flat);
}

struct PartitionOpts {
    double nu = std::numeric_limits<double>::quiet_NaN();
    std::int64_t n_train = -1;
    std::int64_t n_gen = -1;

    [[nodiscard]] Partition realize(std::size_t n) const {
        bool has_nu = !std::isnan(nu);
        bool has_pair = n_train >= 0 || n_gen >= 0;
        if (has_nu == has_pair) throw std::invalid_argument("give exactly one of --nu or (--n-train and --n-gen)");
        if (has_nu) return Partition::from_nu(nu, n);
        if (n_train < 0 || n_gen < 1) throw std::invalid_argument("--n-train and --n-gen must both be given");
        Partition part(static_cast<std::size_t>(n_train), static_cast<std::size_t>(n_gen));
        if (part.total() != n) throw std::invalid_argument("n_train + n_gen must equal the sample size");
        return part;
    }
};

void add_partition(CLI::App* cmd, PartitionOpts& p) {
    cmd->add_option("--nu", p.nu, "Target partition ratio N_gen/N_train (realized on the integer grid)");
    cmd->add_option("--n-train", p.n_train, "Training-set size");
    cmd->add_option("--n-gen", p.n_gen, "Generalization-set size");
}

// ---------------------------------------------------------------- evidence

struct EvidenceArgs {
    CommonOpts common;
    PriorOpts prior;
    std::string input;
    double sigma = 0.0;
    int free_dims = -1;
    std::string refs;
};

void run_evidence(const EvidenceArgs& a) {
    SampleSet data = SampleSet::from_csv(a.input, a.sigma);
    int d = static_cast<int>(data.dims());
    int k = a.free_dims < 0 ? d : a.free_dims;
    GaussianModel model = GaussianModel::nested(k, d);
    if (!a.refs.empty()) {
        auto vals = parse_real_grid(a.refs);
        if (vals.size() != model.fixed_reference.size())
            throw std::invalid_argument("--ref must list one value per pinned coordinate");
        model.fixed_reference = vals;
    }
    PriorSpec prior = a.prior.prior();
    ordered_json j;
    j["config"] = ordered_json{{"command", "evidence"}, {"input", a.input},           {"sigma", a.sigma},
                               {"free_dims", k},        {"improper", a.prior.improper}, {"tau", a.prior.tau}};
    j["n"] = data.size();
    j["dims"] = d;
    double lq = log_evidence(data, model, prior);  // throws the Bartlett error for improper priors
    j["log_evidence"] = lq;
    j["evidence_information"] = -lq;
    PosteriorSpec post = posterior(data, model, prior);
    j["posterior"] = ordered_json{{"mean", post.mean}, {"sd", post.sd}};
    j["mle_information"] = mle_information(data, model);
    log_config_echo(j["config"]);
    emit(a.common, a.common.pretty ? j.dump(2) : j.dump());
}

// ---------------------------------------------------------------- criteria

struct CriteriaArgs {
    CommonOpts common;
    PriorOpts prior;
    PartitionOpts partition;
    std::string input;
    double sigma = 0.0;
    std::string models;
    double fractional_b = 0.0;  // 0 -> 1/N
    std::string format = "json";
};

void run_criteria(const CriteriaArgs& a) {
    SampleSet data = SampleSet::from_csv(a.input, a.sigma);
    const int d = static_cast<int>(data.dims());
    if (data.size() < 2) throw std::invalid_argument("criteria: needs at least two observations");
    Partition part = a.partition.realize(data.size());
    PriorSpec prior = a.prior.prior();
    const double b = a.fractional_b > 0.0 ? a.fractional_b : 1.0 / static_cast<double>(data.size());

    std::vector<int> ks;
    if (a.models.empty())
        for (int k = 0; k <= d; ++k) ks.push_back(k);
    else
        for (double v : parse_real_grid(a.models)) ks.push_back(static_cast<int>(v));

    std::vector<CriterionReport> reports;
    std::vector<std::string> skipped;
    for (int k : ks) {
        GaussianModel model = GaussianModel::nested(k, d);
        std::string label = "K" + std::to_string(k);
        reports.push_back(aic(data, model, label));
        reports.push_back(bic(data, model, label));
        reports.push_back(generalized_ic(data, model, part, label));
        reports.push_back(leave_k_out_report(data, model, prior, part, a.common.budget, a.common.seed, label));
        if (!prior.improper() || k == 0) {
            reports.push_back(evidence_information(data, model, prior, label));
            reports.push_back(fractional_bayes_report(data, model, prior, b, label));
        } else if (skipped.empty()) {
            skipped = {"LOG_EVIDENCE", "FRACTIONAL"};
        }
        reports.push_back(posterior_bayes_report(data, model, prior, label));
    }

    ordered_json selection;
    for (CriterionId id : {CriterionId::AIC, CriterionId::BIC, CriterionId::IC_NU, CriterionId::PSEUDO_BF_TERM,
                           CriterionId::LOG_EVIDENCE, CriterionId::FRACTIONAL, CriterionId::POSTERIOR_BF_TERM}) {
        std::vector<CriterionReport> group;
        for (const auto& r : reports)
            if (r.id == id) group.push_back(r);
        if (group.size() >= 2) selection[criterion_name(id)] = select_model(group);
    }

    ordered_json echo{{"command", "criteria"},
                      {"input", a.input},
                      {"sigma", a.sigma},
                      {"improper", a.prior.improper},
                      {"tau", a.prior.tau},
                      {"n_train", part.n_train},
                      {"n_gen", part.n_gen},
                      {"seed", a.common.seed},
                      {"budget", a.common.budget},
                      {"fractional_b", b}};
    log_config_echo(echo);

    if (a.format == "csv") {
        std::ostringstream os;
        os << "criterion_id,value,complexity,n_train,n_gen,nu,model_id,free_dims,budget,seed,exhaustive\n";
        for (const auto& r : reports) {
            auto opt_num = [](const auto& o) { return o ? format_double(static_cast<double>(*o)) : std::string(); };
            os << criterion_name(r.id) << ',' << format_double(r.value) << ',' << opt_num(r.complexity) << ','
               << (r.n_train ? std::to_string(*r.n_train) : std::string()) << ','
               << (r.n_gen ? std::to_string(*r.n_gen) : std::string()) << ',' << opt_num(r.nu) << ',' << r.model_id << ','
               << r.free_dims << ',' << (r.budget ? std::to_string(*r.budget) : std::string()) << ','
               << (r.seed ? std::to_string(*r.seed) : std::string()) << ','
               << (r.exhaustive ? (*r.exhaustive ? "1" : "0") : "") << '\n';
        }
        emit(a.common, os.str());
        return;
    }

    ordered_json j;
    j["config"] = echo;
    j["reports"] = ordered_json::array();
    for (const auto& r : reports) j["reports"].push_back(ordered_json::parse(r.to_json()));
    j["selected"] = selection;
    if (!skipped.empty()) j["skipped_for_improper_prior"] = skipped;
    emit(a.common, a.common.pretty ? j.dump(2) : j.dump());
}

// ---------------------------------------------------------------- resolution

struct ResolutionArgs {
    CommonOpts common;
    double sigma = 1.0;
    std::string n_grid = "log:2:100000:41";
    std::string taus = "10,100,1000,10000";
    double z = 2.0;
};

void run_resolution(const ResolutionArgs& a) {
    sim::ExperimentConfig cfg;
    cfg.sigma = a.sigma;
    cfg.n_grid = parse_count_grid(a.n_grid);
    cfg.tau_grid = parse_real_grid(a.taus);
    Curve c = sim::resolution_curve(cfg, a.z);
    log_config_echo(ordered_json{{"command", "resolution"}, {"sigma", a.sigma}, {"z", a.z}, {"tau_grid", cfg.tau_grid}});
    emit(a.common, c.to_csv());
}

// ---------------------------------------------------------------- significance

struct SignificanceArgs {
    CommonOpts common;
    int delta_k = 1;
    std::string nu_grid = "log:1e-3:1e3:61";
};

void run_significance(const SignificanceArgs& a) {
    auto grid = parse_real_grid(a.nu_grid);
    Curve c = sim::significance_curve(a.delta_k, grid);
    log_config_echo(ordered_json{{"command", "significance"}, {"delta_k", a.delta_k}});
    emit(a.common, c.to_csv());
}

// ---------------------------------------------------------------- paradox

struct ParadoxArgs {
    CommonOpts common;
    double confidence = 0.95;
    double posterior = 0.95;
    std::size_t n = 100;
    double sigma = 1.0;
};

void run_paradox(const ParadoxArgs& a) {
    sim::LindleyWitness w = sim::lindley_search(a.confidence, a.posterior, a.n, a.sigma);
    ordered_json j;
    j["config"] = ordered_json{{"command", "paradox"}, {"confidence", a.confidence}, {"posterior_target", a.posterior},
                               {"n", a.n},             {"sigma", a.sigma},           {"seed", a.common.seed}};
    j["witness"] = w.to_json();
    j["checks"] = ordered_json{{"two_sided_p", w.p_two_sided},
                               {"posterior_null", w.posterior_null},
                               {"posterior_null_met", w.posterior_null >= a.posterior}};
    log_config_echo(j["config"]);
    emit(a.common, a.common.pretty ? j.dump(2) : j.dump());
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    CommonOpts common;
    std::string experiment;
    std::string mu = "0";
    double sigma = 1.0;
    PriorOpts prior;
    std::string n_grid = "100";
    std::string nu_grid = "0,0.1,1,10";
    std::string tau_grid = "10,100,1000,10000";
    std::size_t replicates = 1000;
    PartitionOpts partition;
    int model_k = 1;
    std::size_t derivative_n = 1000;
};

void run_simulate(const SimulateArgs& a) {
    sim::ExperimentConfig cfg;
    cfg.true_mean = parse_real_grid(a.mu);
    cfg.sigma = a.sigma;
    cfg.improper_prior = a.prior.improper;
    if (!a.prior.improper && a.prior.tau > 0.0) cfg.tau = a.prior.tau;
    cfg.n_grid = parse_count_grid(a.n_grid);
    cfg.nu_grid = parse_real_grid(a.nu_grid);
    cfg.tau_grid = parse_real_grid(a.tau_grid);
    cfg.replicates = a.replicates;
    cfg.seed = a.common.seed;
    cfg.budget = a.common.budget;
    const unsigned threads = a.common.effective_threads();

    sim::ExperimentReport rep;
    if (a.experiment == "unbiasedness") {
        rep = sim::unbiasedness_experiment(cfg, threads);
    } else if (a.experiment == "binning") {
        rep = sim::binning_experiment(cfg, threads);
    } else if (a.experiment == "prepost") {
        rep = sim::prepost_report(cfg, threads);
    } else if (a.experiment == "loss-singleton") {
        rep = sim::loss_ratio_experiment(cfg, sim::LossScenario::singleton, threads);
    } else if (a.experiment == "loss-nested-null") {
        rep = sim::loss_ratio_experiment(cfg, sim::LossScenario::nested_null, threads);
    } else if (a.experiment == "loss-offset") {
        rep = sim::loss_ratio_experiment(cfg, sim::LossScenario::offset_truth, threads);
    } else if (a.experiment == "true-cross") {
        Partition part = a.partition.realize(cfg.n_grid.front());
        GaussianModel model = GaussianModel::nested(a.model_k, static_cast<int>(cfg.true_mean.size()));
        sim::TrueCrossEntropy t = sim::true_cross_entropy(cfg, part, model, cfg.prior(), threads);
        rep.experiment = "true_cross_entropy";
        rep.config = cfg.to_json();
        rep.results["n_train"] = part.n_train;
        rep.results["n_gen"] = part.n_gen;
        rep.results["mc"] = ordered_json{{"value", t.mc.value}, {"se", t.mc.se}};
        rep.results["analytic"] = t.analytic;
    } else if (a.experiment == "derivative") {
        sim::DerivativeCheck chk = sim::derivative_check(cfg, a.derivative_n, threads);
        rep.experiment = "derivative";
        rep.config = cfg.to_json();
        rep.results["n"] = a.derivative_n;
        rep.results["predictive"] = chk.predictive;
        rep.results["n_times_fd"] = chk.n_times_fd;
        rep.results["relative_error"] = chk.relative_error;
    } else {
        throw std::invalid_argument(
            "unknown experiment '" + a.experiment +
            "' (known: unbiasedness binning prepost loss-singleton loss-nested-null loss-offset true-cross derivative)");
    }
    log_config_echo(rep.config);
    emit(a.common, rep.dump(a.common.pretty));
}

// ---------------------------------------------------------------- figures

struct FiguresArgs {
    CommonOpts common;
    std::string which;
    int k = 1;
    int delta_k = 2;
    std::string nu_grid = "log:1e-3:1e3:61";
    std::string n_grid;
    std::string tau_grid = "10,100,1000,10000";
    std::string mu = "0.1";
    double sigma = 1.0;
    double tau = 10.0;
    std::size_t replicates = 1000;
    double z = 2.0;
};

void run_figures(const FiguresArgs& a) {
    sim::ExperimentConfig cfg;
    cfg.sigma = a.sigma;
    cfg.tau = a.tau;
    cfg.tau_grid = parse_real_grid(a.tau_grid);
    cfg.replicates = a.replicates;
    cfg.seed = a.common.seed;
    Curve c;
    if (a.which == "fig1") {
        cfg.n_grid = parse_count_grid(a.n_grid.empty() ? "log:2:1000000:61" : a.n_grid);
        c = sim::resolution_curve(cfg, a.z);
    } else if (a.which == "fig2") {
        c = sim::complexity_curve(a.k, parse_real_grid(a.nu_grid));
    } else if (a.which == "fig3") {
        c = sim::significance_curve(a.delta_k, parse_real_grid(a.nu_grid));
    } else if (a.which == "fig4") {
        cfg.true_mean = parse_real_grid(a.mu);
        cfg.n_grid = parse_count_grid(a.n_grid.empty() ? "pow2:0:20" : a.n_grid);
        c = sim::figure_prepost(cfg, a.common.effective_threads()).curve;
    } else {
        throw std::invalid_argument("unknown figure '" + a.which + "' (known: fig1 fig2 fig3 fig4)");
    }
    log_config_echo(ordered_json{{"command", "figures"}, {"which", a.which}, {"seed", a.common.seed}});
    emit(a.common, c.to_csv());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partsel: partitioned-data model selection for Gaussian location models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file with key=value lines; flags override it");

    EvidenceArgs ev;
    auto* evidence_cmd = app.add_subcommand("evidence", "Log evidence and posterior for a CSV dataset");
    evidence_cmd->add_option("--input", ev.input, "CSV file, one observation per row")->required();
    evidence_cmd->add_option("--sigma", ev.sigma, "Known noise scale (never inferred)")->required();
    evidence_cmd->add_option("--k", ev.free_dims, "Free coordinates (default: all)");
    evidence_cmd->add_option("--ref", ev.refs, "Pinned reference values, comma separated (default zeros)");
    add_prior(evidence_cmd, ev.prior);
    add_common(evidence_cmd, ev.common);
    evidence_cmd->callback([&] { run_evidence(ev); });

    CriteriaArgs cr;
    auto* criteria_cmd = app.add_subcommand("criteria", "All selection criteria for a CSV dataset and model menu");
    criteria_cmd->add_option("--input", cr.input)->required();
    criteria_cmd->add_option("--sigma", cr.sigma)->required();
    criteria_cmd->add_option("--models", cr.models, "Free-dimension menu, e.g. 0,1,2 (default: 0..D)");
    criteria_cmd->add_option("--b", cr.fractional_b, "Fractional-Bayes exponent (default 1/N)");
    criteria_cmd->add_option("--format", cr.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    add_prior(criteria_cmd, cr.prior);
    add_partition(criteria_cmd, cr.partition);
    add_common(criteria_cmd, cr.common);
    criteria_cmd->callback([&] { run_criteria(cr); });

    ResolutionArgs re;
    auto* resolution_cmd = app.add_subcommand("resolution", "Detection-threshold table over sample sizes");
    resolution_cmd->add_option("--sigma", re.sigma)->capture_default_str();
    resolution_cmd->add_option("--n-grid", re.n_grid)->capture_default_str();
    resolution_cmd->add_option("--tau", re.taus, "Prior scales, comma separated")->capture_default_str();
    resolution_cmd->add_option("--z", re.z, "Frequentist threshold multiplier")->capture_default_str();
    add_common(resolution_cmd, re.common);
    resolution_cmd->callback([&] { run_resolution(re); });

    SignificanceArgs si;
    auto* significance_cmd = app.add_subcommand("significance", "Effective significance level over the partition grid");
    significance_cmd->add_option("--dk", si.delta_k, "Model-dimension difference")->capture_default_str();
    significance_cmd->add_option("--nu-grid", si.nu_grid)->capture_default_str();
    add_common(significance_cmd, si.common);
    significance_cmd->callback([&] { run_significance(si); });

    ParadoxArgs pa;
    auto* paradox_cmd = app.add_subcommand("paradox", "Construct a configuration where the paradigms disagree");
    paradox_cmd->add_option("--confidence", pa.confidence)->capture_default_str();
    paradox_cmd->add_option("--posterior", pa.posterior)->capture_default_str();
    paradox_cmd->add_option("--n", pa.n)->capture_default_str();
    paradox_cmd->add_option("--sigma", pa.sigma)->capture_default_str();
    add_common(paradox_cmd, pa.common);
    paradox_cmd->callback([&] { run_paradox(pa); });

    SimulateArgs sm;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a named Monte Carlo experiment");
    simulate_cmd->add_option("--experiment", sm.experiment)->required();
    simulate_cmd->add_option("--mu", sm.mu, "True mean vector, comma separated")->capture_default_str();
    simulate_cmd->add_option("--sigma", sm.sigma)->capture_default_str();
    simulate_cmd->add_option("--n-grid", sm.n_grid)->capture_default_str();
    simulate_cmd->add_option("--nu-grid", sm.nu_grid)->capture_default_str();
    simulate_cmd->add_option("--tau-grid", sm.tau_grid)->capture_default_str();
    simulate_cmd->add_option("--replicates", sm.replicates)->capture_default_str();
    simulate_cmd->add_option("--k", sm.model_k, "Model free dims for true-cross")->capture_default_str();
    simulate_cmd->add_option("--n", sm.derivative_n, "Sample size for the derivative experiment")->capture_default_str();
    add_prior(simulate_cmd, sm.prior);
    add_partition(simulate_cmd, sm.partition);
    add_common(simulate_cmd, sm.common);
    simulate_cmd->callback([&] { run_simulate(sm); });

    FiguresArgs fi;
    auto* figures_cmd = app.add_subcommand("figures", "Emit figure curve data as CSV");
    figures_cmd->add_option("which", fi.which, "fig1|fig2|fig3|fig4")->required();
    figures_cmd->add_option("--k", fi.k)->capture_default_str();
    figures_cmd->add_option("--dk", fi.delta_k)->capture_default_str();
    figures_cmd->add_option("--nu-grid", fi.nu_grid)->capture_default_str();
    figures_cmd->add_option("--n-grid", fi.n_grid, "Sample sizes (fig1/fig4)");
    figures_cmd->add_option("--tau", fi.tau)->capture_default_str();
    figures_cmd->add_option("--tau-grid", fi.tau_grid)->capture_default_str();
    figures_cmd->add_option("--mu", fi.mu, "True displacement for fig4")->capture_default_str();
    figures_cmd->add_option("--sigma", fi.sigma)->capture_default_str();
    figures_cmd->add_option("--replicates", fi.replicates)->capture_default_str();
    figures_cmd->add_option("--z", fi.z)->capture_default_str();
    add_common(figures_cmd, fi.common);
    figures_cmd->callback([&] { run_figures(fi); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
