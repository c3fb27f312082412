#pragma once

#include <span>

#include "surro/rng.hpp"
#include "surro/trial_data.hpp"

namespace surro {

struct RankTestResult {
    double u_y;
    double u_s;
    double delta_hat;  // u_y - u_s
    double variance;
    double ci_upper;   // one-sided (1-alpha) upper bound
    double epsilon;
    Decision decision; // Valid iff ci_upper < epsilon
};

// P(treated > control) + 1/2 P(treated = control), averaged over all pairs.
// O(n log n) via pooled midranks; ties contribute one half.
double mann_whitney_u(std::span<const double> treated, std::span<const double> control);

// u_y - u_s on the same unit partition.
double delta_hat(const TrialData& data);

struct DeltaVarianceComponents {
    double var_delta;
    double var_u_y;
    double var_u_s;
    double cov_u_y_u_s;
};

// Structural-component (projection) estimate of Var(delta_hat) with the
// finite-sample kernel-variance correction; per-unit placement components
// are shared between the two statistics. Requires at least two units per arm.
DeltaVarianceComponents delta_variance_components(const TrialData& data);
double delta_variance(const TrialData& data);

// Within-arm resampling cross-check for the projection estimator.
double delta_variance_bootstrap(const TrialData& data, int resamples, math::RngStream& rng);

// Smallest surrogate effect the one-sided level-alpha Mann-Whitney test
// detects with power 1 - beta (null-variance normal approximation):
// 1/2 + (z_{1-alpha} + z_{1-beta}) * sqrt((n1 + n0 + 1) / (12 n1 n0)).
// Counterpart of the Bayes-factor calibration for the rank method's
// auto threshold: epsilon = max(u_y_hat - mw_detectable_u, 0).
double mw_detectable_u(std::size_t n1, std::size_t n0, double alpha, double beta);

// power target of the rank method's auto calibration (90%)
inline constexpr double kMwCalibrationBeta = 0.1;

RankTestResult rank_test(const TrialData& data, double epsilon, double alpha);

} // namespace surro
