#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "helpers.hpp"
#include "surro/simlab.hpp"
#include "surro/trial_data.hpp"

using json = nlohmann::json;
using testutil::run_cli;
using testutil::slurp;
using testutil::test_tmp_dir;

namespace {

std::string tmp(const std::string& name) { return test_tmp_dir() + "/" + name; }

// minimal structural check against the shipped schema subset:
// every required key exists and carries the declared primitive type
void check_against_schema(const json& doc, const std::string& schema_path) {
    const json schema = json::parse(slurp(schema_path));
    REQUIRE(schema.contains("required"));
    for (const auto& key : schema["required"]) {
        INFO("missing required key: ", key.get<std::string>());
        REQUIRE(doc.contains(key.get<std::string>()));
    }
    for (const auto& [key, spec] : schema["properties"].items()) {
        if (!doc.contains(key)) continue;
        const std::string type = spec["type"];
        const json& v = doc[key];
        if (type == "number") CHECK(v.is_number());
        if (type == "integer") CHECK(v.is_number_integer());
        if (type == "string") CHECK(v.is_string());
        if (type == "object") CHECK(v.is_object());
        if (type == "array") CHECK(v.is_array());
    }
}

std::string schema_dir() {
    // schemas live next to the sources; the binary dir layout is
    // <build>/..., so walk from the compile-time source path instead
    return std::string(SURRO_SOURCE_DOCS);
}

std::string make_toy_csv() {
    const std::string path = tmp("toy.csv");
    std::ofstream out(path);
    out << "id,y,s,z\n1,2,2,1\n2,4,4,1\n3,1,1,0\n4,3,3,0\n";
    return path;
}

} // namespace

TEST_CASE("cli: rank analyze on the toy file") {
    const std::string input = make_toy_csv();
    const std::string out = tmp("toy_report.json");
    const auto r = run_cli("analyze --input '" + input + "' --method rank --threshold 0.1" +
                           " --seed 7 --out '" + out + "'");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(slurp(out));
    CHECK(report["estimates"]["delta_hat"].get<double>() == 0.0);
    CHECK(report["decision"] == "valid");
    check_against_schema(report, schema_dir() + "/analyze_report.schema.json");
}

TEST_CASE("cli: bayes analyze with auto threshold on a near-perfect surrogate") {
    // seeded end-to-end run, pinned decision
    surro::math::RngStream rng(2024, 16);
    const surro::GeneratedTrial gen =
        surro::generate_setting(surro::SettingSpec::make(2), 50, rng);
    const std::string input = tmp("setting2.csv");
    surro::write_trial_csv(input, gen.data);

    const std::string out = tmp("setting2_report.json");
    const std::string draws = tmp("setting2_draws.csv");
    const auto r = run_cli("analyze --input '" + input +
                           "' --method bayes --threshold auto --seed 11 --out '" + out +
                           "' --draws-out '" + draws + "'");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(slurp(out));
    CHECK(report["decision"] == "valid");
    CHECK(report["threshold"]["mode"] == "auto");
    CHECK(report["threshold"]["calibration"]["v_s"].get<double>() > 0.5);
    check_against_schema(report, schema_dir() + "/analyze_report.schema.json");

    // draw export: header plus one row per iteration
    const std::string text = slurp(draws);
    CHECK(text.rfind("iteration,v_y,v_s,theta,acceptance\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 501);
}

TEST_CASE("cli: bayes-cov analyze on a covariate sample") {
    surro::math::RngStream rng(2024, 32);
    const surro::GeneratedTrial gen =
        surro::generate_setting(surro::SettingSpec::make(5), 50, rng);
    const std::string input = tmp("setting5.csv");
    surro::write_trial_csv(input, gen.data);

    const std::string out = tmp("setting5_report.json");
    const auto r = run_cli("analyze --input '" + input +
                           "' --method bayes-cov --threshold auto --seed 13 --out '" + out +
                           "'");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(slurp(out));
    CHECK(report["decision"] == "valid");
    CHECK(report["covariates"].get<int>() == 1);
    check_against_schema(report, schema_dir() + "/analyze_report.schema.json");

    // the covariate model refuses covariate-free data
    const std::string no_x = make_toy_csv();
    CHECK(run_cli("analyze --input '" + no_x + "' --method bayes-cov --seed 1 --out '" +
                  out + "'").exit_code == 1);
}

TEST_CASE("cli: analyze usage errors exit with 2") {
    CHECK(run_cli("analyze").exit_code == 2);                       // missing --input
    CHECK(run_cli("analyze --input x.csv --method nope").exit_code == 2);
    CHECK(run_cli("analyze --input x.csv --alpha 2").exit_code == 2);
    CHECK(run_cli("analyze --input x.csv --unknown-flag 1").exit_code == 2);
}

TEST_CASE("cli: analyze on a missing file is a computation failure") {
    CHECK(run_cli("analyze --input /nonexistent.csv --seed 1").exit_code == 1);
}

TEST_CASE("cli: threshold command") {
    const std::string out = tmp("threshold.json");
    const auto r =
        run_cli("threshold --n 50 --alpha 0.05 --beta 0.2 --a 1 --b 1 --v-y 0.9 --out '" +
                out + "'");
    REQUIRE(r.exit_code == 0);
    const json res = json::parse(slurp(out));
    const double v_s = res["v_s"].get<double>();
    CHECK(res["eta"].get<double>() == doctest::Approx(std::max(0.9 - v_s, 0.0)));
    check_against_schema(res, schema_dir() + "/threshold_report.schema.json");

    // v_y below v_s clamps eta at zero
    const auto r2 = run_cli("threshold --n 50 --v-y 0.51 --out '" + out + "'");
    REQUIRE(r2.exit_code == 0);
    CHECK(json::parse(slurp(out))["eta"].get<double>() == 0.0);

    // no --out: the report goes to stdout
    const auto r3 = run_cli("threshold --n 20 --v-y 0.8");
    REQUIRE(r3.exit_code == 0);
    CHECK(json::parse(r3.stdout_text).contains("v_s"));

    CHECK(run_cli("threshold --n 50 --beta 1.5").exit_code == 2);
    CHECK(run_cli("threshold --beta 0.2").exit_code == 2); // missing --n
}

TEST_CASE("cli: --timings embeds wall-clock data, default output stays stable") {
    const std::string input = make_toy_csv();
    const std::string out = tmp("timed_report.json");
    const auto r = run_cli("analyze --input '" + input +
                           "' --method rank --threshold 0.1 --seed 7 --timings --out '" +
                           out + "'");
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(slurp(out));
    REQUIRE(report.contains("timings"));
    CHECK(report["timings"]["total_seconds"].get<double>() >= 0.0);
}

TEST_CASE("cli: simulate is deterministic given the seed") {
    const std::string out1 = tmp("campaign1.csv");
    const std::string out2 = tmp("campaign2.csv");
    const std::string base =
        "simulate --setting 1 --method rank --reps 5 --n 40 --seed 99 --out ";
    REQUIRE(run_cli(base + "'" + out1 + "'").exit_code == 0);
    REQUIRE(run_cli(base + "'" + out2 + "'").exit_code == 0);
    const std::string text1 = slurp(out1);
    CHECK(text1 == slurp(out2));
    CHECK(text1.rfind("setting,method,reps,n,coverage,power,mean_eta,failures\n", 0) == 0);

    const std::string detail = tmp("campaign_detail.csv");
    REQUIRE(run_cli(base + "'" + out1 + "' --detail '" + detail + "'").exit_code == 0);
    const std::string detail_text = slurp(detail);
    CHECK(detail_text.rfind("rep,ok,valid,covered,estimate,upper,threshold,error\n", 0) == 0);
    CHECK(std::count(detail_text.begin(), detail_text.end(), '\n') == 6); // header + 5 reps

    CHECK(run_cli("simulate --setting 9 --method rank").exit_code == 2);
    CHECK(run_cli("simulate --setting 1 --method bogus").exit_code == 2);
}

TEST_CASE("cli: heatmap grid output") {
    const std::string out = tmp("heatmap.csv");
    const auto r = run_cli("heatmap --delta 5 --range -2:2 --step 1 --out '" + out + "'");
    REQUIRE(r.exit_code == 0);
    const std::string text = slurp(out);
    // first row carries the d_s axis; diagonal cells are zero
    CHECK(text.rfind(",-2,-1,0,1,2\n", 0) == 0);
    CHECK(run_cli("heatmap --range nonsense --out '" + out + "'").exit_code == 2);
    CHECK(run_cli("heatmap --range -2:2 --step 0 --out '" + out + "'").exit_code == 2);
}
