// surro — surrogate marker evaluation toolkit.
//
// Subcommands: analyze (rank or Bayesian validity test on a trial CSV),
// threshold (Bayes-factor calibration of the validity margin), simulate
// (replication campaigns over the built-in settings), heatmap (rank vs
// causal discrepancy surface). Every randomized command is fully
// reproducible from --seed; output files are byte-stable.

#include <chrono>
#include <iostream>
#include <fstream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "surro/bayes.hpp"
#include "surro/gaussian.hpp"
#include "surro/rank.hpp"
#include "surro/simlab.hpp"
#include "surro/threshold.hpp"
#include "surro/trial_data.hpp"

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << s << " (generated; pass --seed to reproduce)\n";
    return s;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw surro::ValidationError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto pos = text.find(':', 1);
    if (pos == std::string::npos || pos + 1 >= text.size())
        throw UsageError("malformed --range '" + text + "' (expected lo:hi)");
    try {
        std::size_t used = 0;
        const double lo = std::stod(text.substr(0, pos), &used);
        if (used != pos) throw std::invalid_argument("lo");
        const double hi = std::stod(text.substr(pos + 1), &used);
        if (used != text.size() - pos - 1) throw std::invalid_argument("hi");
        if (!(lo < hi)) throw UsageError("--range requires lo < hi");
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed --range '" + text + "' (expected lo:hi)");
    }
}

std::optional<double> parse_threshold(const std::string& text) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("threshold");
        return v;
    } catch (const std::invalid_argument&) {
        throw UsageError("--threshold must be a real number or 'auto'");
    }
}

json threshold_result_json(const surro::ThresholdResult& res, bool with_table) {
    json j;
    j["n"] = res.config.n;
    j["alpha"] = res.config.alpha;
    j["beta"] = res.config.beta;
    j["a"] = res.config.a;
    j["b"] = res.config.b;
    j["critical"] = res.critical.critical;
    j["log_critical"] = res.critical.log_critical;
    j["critical_index"] = res.critical.k_index;
    j["attained_level"] = res.critical.attained_level;
    j["v_s"] = res.v_s;
    if (res.v_y) j["v_y"] = *res.v_y;
    if (res.eta) j["eta"] = *res.eta;
    if (with_table) {
        json table = json::array();
        for (std::size_t k = 0; k < res.null_dist.log_bf.size(); ++k) {
            json row;
            row["k"] = k;
            row["bf"] = std::exp(res.null_dist.log_bf[k]);
            row["log_bf"] = res.null_dist.log_bf[k];
            row["prob"] = res.null_dist.prob[k];
            table.push_back(std::move(row));
        }
        j["table"] = std::move(table);
    }
    return j;
}

int cmd_analyze(const std::string& input, const std::string& method_str, double alpha,
                const std::string& threshold_str, int iters, int burnin,
                std::optional<std::uint64_t> seed_opt, const std::string& out_path,
                const std::string& draws_out, bool timings) {
    const auto t_start = std::chrono::steady_clock::now();
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    const surro::Method method = [&] {
        try {
            return surro::method_from_name(method_str);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }();
    const std::optional<double> fixed_threshold = parse_threshold(threshold_str);

    surro::AnalysisConfig config;
    config.alpha = alpha;
    config.threshold = fixed_threshold;
    config.iters = iters;
    config.burnin = burnin;
    config.seed = resolve_seed(seed_opt);
    if (burnin < 0 || burnin >= iters) throw UsageError("--burnin must satisfy 0 <= b < iters");

    const surro::TrialData data = surro::load_trial_csv(input);
    for (const auto& w : data.warnings()) std::cerr << "warning: " << w << "\n";

    json report;
    report["command"] = "analyze";
    report["method"] = method_str;
    report["input"] = input;
    report["n"] = data.n();
    report["n1"] = data.n1();
    report["n0"] = data.n0();
    report["covariates"] = data.covariate_dim();
    report["alpha"] = alpha;
    report["seed"] = config.seed;

    surro::ThresholdConfig tc = config.threshold_config;
    tc.n = static_cast<int>(data.n());

    double threshold_value = 0.0;
    json threshold_info;
    json estimates;
    std::string decision;

    if (method == surro::Method::Rank) {
        const double u_y =
            surro::mann_whitney_u(data.arm_values(1, false), data.arm_values(0, false));
        threshold_info["mode"] = fixed_threshold ? "fixed" : "auto";
        if (fixed_threshold) {
            threshold_value = *fixed_threshold;
        } else {
            // frequentist calibration: the smallest surrogate effect the
            // Mann-Whitney test itself detects with power 1 - beta
            const double u_s_detectable = surro::mw_detectable_u(
                data.n1(), data.n0(), tc.alpha, surro::kMwCalibrationBeta);
            threshold_value = surro::compute_eta(u_y, u_s_detectable);
            json calib;
            calib["method"] = "mann-whitney-power";
            calib["alpha"] = tc.alpha;
            calib["beta"] = surro::kMwCalibrationBeta;
            calib["u_s"] = u_s_detectable;
            calib["u_y"] = u_y;
            threshold_info["calibration"] = std::move(calib);
        }
        const surro::RankTestResult r = surro::rank_test(data, threshold_value, alpha);
        estimates["u_y"] = r.u_y;
        estimates["u_s"] = r.u_s;
        estimates["delta_hat"] = r.delta_hat;
        estimates["variance"] = r.variance;
        estimates["ci_upper"] = r.ci_upper;
        decision = r.decision == surro::Decision::Valid ? "valid" : "not-valid";
        threshold_info["value"] = threshold_value;
    } else {
        const surro::BayesModel model = method == surro::Method::BayesCov
                                            ? surro::BayesModel::Covariates
                                            : surro::BayesModel::NoCovariates;
        report["iters"] = iters;
        report["burnin"] = burnin;
        const surro::PosteriorDraws draws = surro::run_chain(data, config, model);

        double v_y_bar = 0.0, v_s_bar = 0.0, theta_bar = 0.0;
        const std::size_t m = draws.theta.size() - burnin;
        for (std::size_t t = burnin; t < draws.theta.size(); ++t) {
            v_y_bar += draws.v_y[t];
            v_s_bar += draws.v_s[t];
            theta_bar += draws.theta[t];
        }
        v_y_bar /= m;
        v_s_bar /= m;
        theta_bar /= m;

        std::optional<surro::ThresholdResult> calib;
        if (fixed_threshold) {
            threshold_value = *fixed_threshold;
        } else {
            calib = surro::select_threshold(tc, v_y_bar);
            threshold_value = *calib->eta;
        }
        const surro::BayesTestResult res =
            surro::credible_decision(draws, threshold_value, alpha, burnin);
        estimates["posterior_mean_v_y"] = v_y_bar;
        estimates["posterior_mean_v_s"] = v_s_bar;
        estimates["posterior_mean_theta"] = theta_bar;
        estimates["theta_quantile"] = res.theta_quantile;
        estimates["accept_rate_sigma"] = draws.accept_rate_sigma;
        estimates["accept_rate_corr"] = draws.accept_rate_corr;
        decision = res.decision == surro::Decision::Valid ? "valid" : "not-valid";
        threshold_info["mode"] = fixed_threshold ? "fixed" : "auto";
        threshold_info["value"] = threshold_value;
        if (calib) threshold_info["calibration"] = threshold_result_json(*calib, false);
        if (!draws_out.empty()) surro::write_draws_csv(draws_out, draws);
    }

    report["threshold"] = std::move(threshold_info);
    report["estimates"] = std::move(estimates);
    report["decision"] = decision;
    json warn = json::array();
    for (const auto& w : data.warnings()) warn.push_back(w);
    report["warnings"] = std::move(warn);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (timings) report["timings"] = {{"total_seconds", elapsed}};
    write_json(out_path, report);
    std::cerr << "analyze: " << decision << " (" << elapsed << " s)\n";
    return 0;
}

int cmd_threshold(int n, double alpha, double beta, double a, double b,
                  std::optional<double> v_y, bool with_table, const std::string& out_path) {
    if (n < 1) throw UsageError("--n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw UsageError("--beta must lie in (0,1)");
    if (!(a > 0.0 && b > 0.0)) throw UsageError("--a and --b must be > 0");

    const surro::ThresholdConfig config{n, alpha, beta, a, b};
    const surro::ThresholdResult res = surro::select_threshold(config, v_y);
    const json j = threshold_result_json(res, with_table);
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json(out_path, j);
    return 0;
}

int cmd_simulate(int setting, const std::string& method_str, int reps, int n,
                 std::optional<std::uint64_t> seed_opt, int jobs, double alpha,
                 const std::string& threshold_str, int iters, int burnin,
                 const std::string& out_path, const std::string& detail_path) {
    if (setting < 1 || setting > 5) throw UsageError("--setting must lie in 1..5");
    if (reps < 1) throw UsageError("--reps must be >= 1");
    if (n < 4) throw UsageError("--n must be >= 4");
    if (jobs < 1) throw UsageError("--jobs must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    const surro::Method method = [&] {
        try {
            return surro::method_from_name(method_str);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }();

    surro::AnalysisConfig config;
    config.alpha = alpha;
    config.threshold = parse_threshold(threshold_str);
    config.iters = iters;
    config.burnin = burnin;
    config.seed = resolve_seed(seed_opt);
    if (burnin < 0 || burnin >= iters) throw UsageError("--burnin must satisfy 0 <= b < iters");

    const surro::SettingSpec spec = surro::SettingSpec::make(setting);
    const surro::CampaignResult result =
        surro::run_campaign(spec, method, reps, n, config, jobs);
    surro::write_campaign_csv(out_path, result);
    if (!detail_path.empty()) surro::write_campaign_detail_csv(detail_path, result);

    std::cerr << "simulate: setting " << setting << ", " << method_str << ", reps " << reps
              << ", power " << result.power << ", coverage " << result.coverage << ", failures "
              << result.failures << " (" << result.elapsed_seconds << " s)\n";
    return 0;
}

int cmd_heatmap(double delta, const std::string& range_str, double step,
                const std::string& out_path) {
    const auto [lo, hi] = parse_range(range_str);
    if (!(step > 0.0)) throw UsageError("--step must be > 0");
    const surro::HeatmapGrid grid = surro::heatmap_grid(delta, lo, hi, step);
    surro::write_heatmap_csv(out_path, grid);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"surro — surrogate marker evaluation toolkit"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "validity test on a trial CSV");
    std::string an_input, an_method = "rank", an_threshold = "auto", an_out = "report.json";
    std::string an_draws_out;
    double an_alpha = 0.05;
    int an_iters = 500, an_burnin = 125;
    std::optional<std::uint64_t> an_seed;
    bool an_timings = false;
    analyze->add_option("--input", an_input, "trial CSV (id,y,s,z[,x1..xd])")->required();
    analyze->add_option("--method", an_method, "rank | bayes | bayes-cov");
    analyze->add_option("--alpha", an_alpha, "significance level");
    analyze->add_option("--threshold", an_threshold, "validity margin or 'auto'");
    analyze->add_option("--iters", an_iters, "posterior iterations");
    analyze->add_option("--burnin", an_burnin, "burn-in iterations");
    analyze->add_option("--seed", an_seed, "RNG seed");
    analyze->add_option("--out", an_out, "JSON report path");
    analyze->add_option("--draws-out", an_draws_out, "posterior draw CSV (bayes only)");
    analyze->add_flag("--timings", an_timings, "embed wall-clock timings in the report");

    // threshold
    auto* threshold = app.add_subcommand("threshold", "Bayes-factor margin calibration");
    int th_n = 50;
    double th_alpha = 0.05, th_beta = 0.2, th_a = 1.0, th_b = 1.0;
    std::optional<double> th_v_y;
    bool th_table = false;
    std::string th_out;
    threshold->add_option("--n", th_n, "sample size")->required();
    threshold->add_option("--alpha", th_alpha, "type-I error level");
    threshold->add_option("--beta", th_beta, "1 - target power");
    threshold->add_option("--a", th_a, "Beta prior parameter a");
    threshold->add_option("--b", th_b, "Beta prior parameter b");
    threshold->add_option("--v-y", th_v_y, "hypothesized effect on the primary outcome");
    threshold->add_flag("--table", th_table, "include the full BF support table");
    threshold->add_option("--out", th_out, "JSON path (default: stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "replication campaign on a setting");
    int si_setting = 1, si_reps = 100, si_n = 50, si_jobs = 1, si_iters = 500, si_burnin = 125;
    double si_alpha = 0.05;
    std::string si_method = "rank", si_threshold = "auto", si_out = "campaign.csv", si_detail;
    std::optional<std::uint64_t> si_seed;
    simulate->add_option("--setting", si_setting, "setting id (1..5)")->required();
    simulate->add_option("--method", si_method, "rank | bayes | bayes-cov")->required();
    simulate->add_option("--reps", si_reps, "replication count");
    simulate->add_option("--n", si_n, "sample size per replication");
    simulate->add_option("--seed", si_seed, "RNG seed");
    simulate->add_option("--jobs", si_jobs, "replication-level parallelism");
    simulate->add_option("--alpha", si_alpha, "significance level");
    simulate->add_option("--threshold", si_threshold, "validity margin or 'auto'");
    simulate->add_option("--iters", si_iters, "posterior iterations");
    simulate->add_option("--burnin", si_burnin, "burn-in iterations");
    simulate->add_option("--out", si_out, "campaign CSV path");
    simulate->add_option("--detail", si_detail, "per-replication CSV path");

    // heatmap
    auto* heatmap = app.add_subcommand("heatmap", "rank vs causal discrepancy surface");
    double he_delta = 5.0, he_step = 0.5;
    std::string he_range = "-40:40", he_out = "heatmap.csv";
    heatmap->add_option("--delta", he_delta, "homogeneous treatment effect");
    heatmap->add_option("--range", he_range, "axis range lo:hi");
    heatmap->add_option("--step", he_step, "grid step");
    heatmap->add_option("--out", he_out, "heatmap CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(an_input, an_method, an_alpha, an_threshold, an_iters, an_burnin,
                               an_seed, an_out, an_draws_out, an_timings);
        if (app.got_subcommand(threshold))
            return cmd_threshold(th_n, th_alpha, th_beta, th_a, th_b, th_v_y, th_table, th_out);
        if (app.got_subcommand(simulate))
            return cmd_simulate(si_setting, si_method, si_reps, si_n, si_seed, si_jobs, si_alpha,
                                si_threshold, si_iters, si_burnin, si_out, si_detail);
        if (app.got_subcommand(heatmap))
            return cmd_heatmap(he_delta, he_range, he_step, he_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
