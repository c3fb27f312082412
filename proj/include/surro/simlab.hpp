#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surro/bayes.hpp"
#include "surro/gaussian.hpp"
#include "surro/trial_data.hpp"

namespace surro {

enum class Method { Rank, Bayes, BayesCov };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Benchmark data-generating settings:
//   1  useless surrogate (independent of the primary outcome)
//   2  near-perfect surrogate (linear map, negligible noise)
//   3  imperfect surrogate (linear map, substantial noise)
//   4  non-Gaussian outcome, non-linear surrogate (misspecifies the model)
//   5  binary-covariate mixture that splits the rank and causal parameters
struct SettingSpec {
    int id;
    // Gaussian mixture description for settings 1-3 and 5; empty for 4.
    CovariateMixture mixture;
    bool has_covariate = false;

    static SettingSpec make(int id);
};

enum class TruthProvenance { Analytic, MonteCarlo };

struct SettingTruth {
    double delta_true;
    double theta_true;
    TruthProvenance provenance;
    double mc_se_delta = 0.0; // zero for analytic truths
    double mc_se_theta = 0.0;
};

struct GeneratedTrial {
    TrialData data;
    PotentialTable latent; // full table, test oracles only
};

// Draws the full potential table for the setting, assigns arms with
// probability 1/2 (re-drawn if an arm comes out empty), and reveals only the
// observed pair per unit (plus x in Setting 5).
GeneratedTrial generate_setting(const SettingSpec& spec, int n, math::RngStream& rng);

// Analytic for the Gaussian settings; Monte Carlo for Setting 4.
SettingTruth setting_truth(const SettingSpec& spec, long mc_draws = 10'000'000,
                           std::uint64_t mc_seed = 20240901);

struct RepOutcome {
    int rep;
    bool ok;
    bool valid;
    bool covered;
    double estimate;   // delta_hat (rank) or posterior mean theta (bayes)
    double upper;      // one-sided interval upper bound
    double threshold;  // epsilon / eta actually applied
    std::string error; // nonempty when ok == false
};

struct CampaignResult {
    int setting;
    Method method;
    int reps;
    int n;
    double coverage;       // fraction of ok reps whose interval covers the truth
    double power;          // fraction of ok reps declared valid
    double mean_threshold; // average threshold used across ok reps
    int failures;
    std::vector<RepOutcome> detail;
    double elapsed_seconds = 0.0; // informational; not part of file output
};

// Seeded, replication-parallel campaign. Replication r derives its RNG
// streams from (config.seed, r), so results are independent of execution
// order and of the job count.
CampaignResult run_campaign(const SettingSpec& spec, Method method, int reps, int n,
                            const AnalysisConfig& config, int jobs = 1);

void write_campaign_csv(const std::string& path, const CampaignResult& result);
void write_campaign_detail_csv(const std::string& path, const CampaignResult& result);

} // namespace surro
