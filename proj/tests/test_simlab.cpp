#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "surro/errors.hpp"
#include "surro/rank.hpp"
#include "surro/simlab.hpp"

using namespace surro;
using namespace surro::math;

TEST_CASE("generate_setting: observed stratum means match the generator (setting 5)") {
    const SettingSpec spec = SettingSpec::make(5);
    RngStream rng(314, 0);
    const GeneratedTrial gen = generate_setting(spec, 100000, rng);
    double sum_y = 0.0, sum_s = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < gen.data.n(); ++i) {
        const TrialRecord& r = gen.data.record(i);
        if (r.z == 1 && r.x[0] == 0.0) {
            sum_y += r.y;
            sum_s += r.s;
            ++cnt;
        }
    }
    REQUIRE(cnt > 20000);
    const double se_y = 1.0 / std::sqrt(static_cast<double>(cnt));
    const double se_s = std::sqrt(2.0) / std::sqrt(static_cast<double>(cnt));
    CHECK(std::fabs(sum_y / cnt - 5.0) < 3.0 * se_y);
    CHECK(std::fabs(sum_s / cnt - 5.0) < 3.0 * se_s);
}

TEST_CASE("generate_setting: useless surrogate is uncorrelated with the outcome") {
    const SettingSpec spec = SettingSpec::make(1);
    RngStream rng(315, 0);
    const GeneratedTrial gen = generate_setting(spec, 50000, rng);
    // correlation between the latent treatment differences of s and y
    double sy = 0.0, sy2 = 0.0, ss = 0.0, ss2 = 0.0, cross = 0.0;
    const double n = static_cast<double>(gen.latent.n());
    for (const auto& row : gen.latent.rows) {
        const double dy = row[0] - row[2];
        const double ds = row[1] - row[3];
        sy += dy;
        sy2 += dy * dy;
        ss += ds;
        ss2 += ds * ds;
        cross += dy * ds;
    }
    const double cov = cross / n - (sy / n) * (ss / n);
    const double corr =
        cov / std::sqrt((sy2 / n - (sy / n) * (sy / n)) * (ss2 / n - (ss / n) * (ss / n)));
    CHECK(std::fabs(corr) < 3.0 / std::sqrt(n));
}

TEST_CASE("generate_setting: near-noiseless linear surrogate preserves ranks") {
    const SettingSpec spec = SettingSpec::make(2);
    RngStream rng(316, 0);
    const GeneratedTrial gen = generate_setting(spec, 10000, rng);
    // per-unit rank agreement of the latent treated values
    std::vector<std::size_t> order_y(gen.latent.n()), order_s(gen.latent.n());
    std::vector<double> y(gen.latent.n()), s(gen.latent.n());
    for (std::size_t i = 0; i < gen.latent.n(); ++i) {
        y[i] = gen.latent.rows[i][0];
        s[i] = gen.latent.rows[i][1];
    }
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size()), rank(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
        return rank;
    };
    const auto ry = ranks(y);
    const auto rs = ranks(s);
    // near-noiseless map: ranks agree within 1% of n for at least 99% of units
    const double slack = 0.01 * static_cast<double>(ry.size());
    std::size_t agree = 0;
    for (std::size_t i = 0; i < ry.size(); ++i) {
        const double dr = static_cast<double>(ry[i]) - static_cast<double>(rs[i]);
        agree += std::fabs(dr) <= slack;
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(ry.size()) >= 0.99);
}

TEST_CASE("generate_setting: arms are never empty and n >= 4 enforced") {
    const SettingSpec spec = SettingSpec::make(1);
    RngStream rng(317, 0);
    for (int it = 0; it < 200; ++it) {
        const GeneratedTrial gen = generate_setting(spec, 4, rng);
        CHECK(gen.data.n1() >= 1);
        CHECK(gen.data.n0() >= 1);
    }
    CHECK_THROWS_AS(generate_setting(spec, 3, rng), DomainError);
}

TEST_CASE("setting_truth: analytic values for the Gaussian settings") {
    const SettingTruth t5 = setting_truth(SettingSpec::make(5));
    CHECK(t5.provenance == TruthProvenance::Analytic);
    CHECK(t5.delta_true == doctest::Approx(0.2514).epsilon(2e-3));
    CHECK(t5.theta_true == doctest::Approx(0.00601).epsilon(2e-2));

    const SettingTruth t1 = setting_truth(SettingSpec::make(1));
    // no treatment effect on s by construction: u_s = v_s = 1/2 exactly
    const SettingSpec spec1 = SettingSpec::make(1);
    CHECK(within_unit_prob(spec1.mixture.groups[0], Target::S) == 0.5);
    CHECK(between_unit_prob(spec1.mixture.groups[0], spec1.mixture.groups[0], Target::S) ==
          0.5);
    CHECK(t1.delta_true == doctest::Approx(t1.theta_true).epsilon(1e-12));

    const SettingTruth t2 = setting_truth(SettingSpec::make(2));
    CHECK(std::fabs(t2.theta_true) < 0.01); // near-perfect surrogate
}

TEST_CASE("setting_truth: analytic values agree with latent-table Monte Carlo") {
    for (int id : {2, 3, 5}) {
        const SettingSpec spec = SettingSpec::make(id);
        const SettingTruth truth = setting_truth(spec);
        RngStream rng(1000 + id, 0);
        const GeneratedTrial gen = generate_setting(spec, 200000, rng);
        double d_sum = 0.0, d_sum2 = 0.0, t_sum = 0.0, t_sum2 = 0.0;
        const std::size_t m = gen.latent.n();
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = gen.latent.rows[i];
            const auto& b = gen.latent.rows[(i + 1) % m]; // independent partner
            const double d =
                (a[0] > b[2] ? 1.0 : 0.0) - (a[1] > b[3] ? 1.0 : 0.0);
            const double t = (a[0] > a[2] ? 1.0 : 0.0) - (a[1] > a[3] ? 1.0 : 0.0);
            d_sum += d;
            d_sum2 += d * d;
            t_sum += t;
            t_sum2 += t * t;
        }
        const double dn = static_cast<double>(m);
        const double d_mc = d_sum / dn;
        const double t_mc = t_sum / dn;
        const double d_se = std::sqrt((d_sum2 / dn - d_mc * d_mc) / dn);
        const double t_se = std::sqrt((t_sum2 / dn - t_mc * t_mc) / dn);
        CHECK(std::fabs(truth.delta_true - d_mc) < 3.5 * d_se + 1e-4);
        CHECK(std::fabs(truth.theta_true - t_mc) < 3.5 * t_se + 1e-4);
    }
}

TEST_CASE("setting_truth: setting 4 reports Monte Carlo provenance and se") {
    const SettingTruth t4 = setting_truth(SettingSpec::make(4), 500000, 99);
    CHECK(t4.provenance == TruthProvenance::MonteCarlo);
    CHECK(t4.mc_se_delta > 0.0);
    CHECK(t4.mc_se_theta > 0.0);
    // monotone surrogate map: the rank discrepancy stays small
    CHECK(std::fabs(t4.delta_true) < 0.2);
}

TEST_CASE("run_campaign: deterministic and order-independent") {
    const SettingSpec spec = SettingSpec::make(2);
    AnalysisConfig config;
    config.seed = 777;
    config.iters = 60;
    config.burnin = 20;

    const CampaignResult a = run_campaign(spec, Method::Rank, 8, 40, config, 1);
    const CampaignResult b = run_campaign(spec, Method::Rank, 8, 40, config, 3);
    REQUIRE(a.detail.size() == b.detail.size());
    CHECK(a.coverage == b.coverage);
    CHECK(a.power == b.power);
    CHECK(a.mean_threshold == b.mean_threshold);
    for (std::size_t r = 0; r < a.detail.size(); ++r) {
        CHECK(a.detail[r].estimate == b.detail[r].estimate);
        CHECK(a.detail[r].upper == b.detail[r].upper);
        CHECK(a.detail[r].threshold == b.detail[r].threshold);
    }

    const CampaignResult c = run_campaign(spec, Method::Bayes, 3, 30, config, 2);
    const CampaignResult d = run_campaign(spec, Method::Bayes, 3, 30, config, 1);
    for (std::size_t r = 0; r < c.detail.size(); ++r)
        CHECK(c.detail[r].estimate == d.detail[r].estimate);
}

TEST_CASE("run_campaign: replication data is shared across methods") {
    // same (seed, rep) => same generated trial regardless of method
    const SettingSpec spec = SettingSpec::make(5);
    RngStream r1(123, 16ULL * 3);
    RngStream r2(123, 16ULL * 3);
    const GeneratedTrial g1 = generate_setting(spec, 50, r1);
    const GeneratedTrial g2 = generate_setting(spec, 50, r2);
    for (std::size_t i = 0; i < g1.data.n(); ++i) {
        CHECK(g1.data.record(i).y == g2.data.record(i).y);
        CHECK(g1.data.record(i).z == g2.data.record(i).z);
    }
}

TEST_CASE("run_campaign: bayes-cov demands a covariate setting") {
    AnalysisConfig config;
    config.seed = 1;
    CHECK_THROWS_AS(run_campaign(SettingSpec::make(1), Method::BayesCov, 2, 20, config, 1),
                    DomainError);
}

TEST_CASE("run_campaign: useless surrogate is almost never declared valid") {
    // type-I behaviour of the rank test across 500 replications
    AnalysisConfig config;
    config.seed = 818;
    const CampaignResult res =
        run_campaign(SettingSpec::make(1), Method::Rank, 500, 50, config, 2);
    REQUIRE(res.failures == 0);
    CHECK(res.power <= 0.05);
}

TEST_CASE("run_campaign: setting-5 rank estimates concentrate on the rank truth") {
    const SettingSpec spec = SettingSpec::make(5);
    const SettingTruth truth = setting_truth(spec);
    AnalysisConfig config;
    config.seed = 4242;
    const int reps = 200;
    const CampaignResult res = run_campaign(spec, Method::Rank, reps, 50, config, 2);
    REQUIRE(res.failures == 0);
    std::vector<double> estimates;
    for (const auto& r : res.detail) estimates.push_back(r.estimate);
    const double m = testutil::mean(estimates);
    const double se = testutil::sample_sd(estimates) / std::sqrt(static_cast<double>(reps));
    CHECK(std::fabs(m - truth.delta_true) < 3.0 * se + 0.005);
}
