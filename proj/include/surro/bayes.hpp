#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "surro/mvn.hpp"
#include "surro/priors.hpp"
#include "surro/trial_data.hpp"

namespace surro {

enum class BayesModel { NoCovariates, Covariates };

// One posterior draw's parameter summary. Correlation entries are listed
// row-major over the upper triangle of the 4x4 matrix in the canonical
// (y1, s1, y0, s0) order: (y1,s1), (y1,y0), (y1,s0), (s1,y0), (s1,s0), (y0,s0).
struct TraceRow {
    std::array<double, 4> sigma;
    std::array<double, 6> corr;
    std::vector<double> mean; // mu (4) or B flattened row-major (4 x d')
};

struct PosteriorDraws {
    std::vector<double> theta; // theta_hat per iteration, in [-1, 1]
    std::vector<double> v_y;
    std::vector<double> v_s;
    std::vector<TraceRow> traces;
    std::vector<double> accept; // per-iteration mean of the two MH block indicators
    double accept_rate_sigma = 0.0; // post-burn-in acceptance fractions
    double accept_rate_corr = 0.0;
    int burnin = 0;
};

struct BayesTestResult {
    double theta_quantile;       // empirical (1-alpha) upper quantile after burn-in
    double eta;
    Decision decision;           // Valid iff theta_quantile < eta
    double posterior_mean_v_y;   // post-burn-in mean, feeds threshold calibration
};

// Data-augmentation sampler: exact Gaussian imputation of the unobserved
// potential-outcome pair, conjugate mean/coefficient update, and
// coordinate-wise Metropolis-within-Gibbs on (log sigma, correlation) with
// per-coordinate random-walk scales adapted during burn-in. The mean and
// covariance updates condition on the observed halves only (collapsed over
// the imputations); the imputed pairs feed the concordance estimates.
class ChainSampler {
  public:
    ChainSampler(const TrialData& data, const ModelPriors& priors, BayesModel model,
                 math::RngStream rng, bool intercept = true);

    void impute_all();
    void impute_unit(std::size_t i);
    void update_mean();
    void update_covariance();

    void step(); // impute_all + update_mean + update_covariance

    double v_y_hat() const;
    double v_s_hat() const;

    // Test hooks. Disabling the likelihood turns every update into a draw
    // from its prior conditional.
    void set_likelihood_enabled(bool on) { likelihood_on_ = on; }
    void set_adaptation(bool on) { adapting_ = on; }
    void set_sigma(const math::Vector& sigma_scales); // also for tests
    void set_correlation(const math::CorrelationMatrix& omega);
    void set_mean(const math::Vector& mean_flat);

    const PotentialTable& completed() const { return table_; }
    void set_completed(const PotentialTable& table); // test hook: fix the full table
    math::Vector sigma_scales() const;
    math::Matrix correlation() const;
    math::Vector mean_flat() const;
    std::size_t design_dim() const { return dprime_; }

    // fraction of coordinate proposals accepted in the last sweep
    double last_sigma_accept_fraction() const { return last_accept_sigma_; }
    double last_corr_accept_fraction() const { return last_accept_corr_; }

  private:
    double log_target_cov(const std::array<double, 4>& log_sigma,
                          const std::array<double, 6>& cpc_raw) const;
    void rebuild_cov_cache();
    void mean_of_unit(std::size_t i, double out[4]) const;

    // data
    std::size_t n_;
    PotentialTable table_;
    math::Matrix design_; // n x d' (empty for the no-covariate model)
    std::size_t dprime_ = 0;
    BayesModel model_;
    ModelPriors priors_;
    math::Vector mu_beta_;      // materialized coefficient prior
    math::Matrix sigma_beta_inv_;
    math::Matrix sigma0_inv_;

    // state
    std::vector<double> mean_flat_;     // mu (4) or B row-major (4 x d')
    std::array<double, 4> log_sigma_{};
    std::array<double, 6> cpc_raw_{};   // atanh of canonical partial correlations

    // cov cache derived from (log_sigma_, cpc_raw_)
    std::array<double, 4> sigma_{};
    double corr_chol_[4][4] = {};  // L with Omega = L L^T
    double sigma_chol_[4][4] = {}; // diag(sigma) * L

    math::RngStream rng_;
    bool likelihood_on_ = true;
    bool adapting_ = true;
    std::array<double, 4> scale_sigma_{0.3, 0.3, 0.3, 0.3};
    std::array<double, 6> scale_corr_{0.4, 0.4, 0.4, 0.4, 0.4, 0.4};
    std::uint64_t adapt_count_ = 0;
    double last_accept_sigma_ = 0.0;
    double last_accept_corr_ = 0.0;
};

// Algorithm: T iterations of impute -> mean update -> covariance update,
// recording V_y, V_s and their difference from the completed table each
// iteration. Deterministic given (config.seed, stream); parallel callers
// pass distinct stream ids.
PosteriorDraws run_chain(const TrialData& data, const AnalysisConfig& config, BayesModel model,
                         bool intercept = true, std::uint64_t stream = 1);

// Order statistic at index ceil(level * m) (1-based) of m values.
double upper_quantile(std::vector<double> draws, double level);

BayesTestResult credible_decision(const PosteriorDraws& draws, double eta, double alpha,
                                  int burnin);

void write_draws_csv(const std::string& path, const PosteriorDraws& draws);

} // namespace surro
