#pragma once

#include <optional>
#include <vector>

namespace surro {

// Inputs of the Bayes-factor threshold calibration: trial size n, test level
// alpha, target power 1 - beta, and the Beta(a, b) prior (renormalized to
// (1/2, 1)) for the surrogate concordance under the alternative.
struct ThresholdConfig {
    int n = 50;
    double alpha = 0.05;
    double beta = 0.2;
    double a = 1.0;
    double b = 1.0;

    void validate() const;
};

// Finite support of BF_n under H0: value x_k at count k with weight
// C(n,k) / 2^n, k = 0..n. Values are kept in log scale; bf(k) may overflow
// to +inf for very large n while log_bf stays finite.
struct BfDistribution {
    std::vector<double> log_bf;
    std::vector<double> prob;

    double bf(int k) const;
};

struct BfCritical {
    int k_index;           // critical value is x_{k_index}; reject when BF > x_{k_index}
    double log_critical;
    double critical;       // exp(log_critical), +inf if out of double range
    double attained_level; // exact P(BF > critical | H0), always <= alpha
};

struct ThresholdResult {
    ThresholdConfig config;
    BfCritical critical;
    double v_s;                  // smallest concordance detected with power 1 - beta
    std::optional<double> v_y;   // hypothesized effect on the primary outcome
    std::optional<double> eta;   // max(v_y - v_s, 0) when v_y is supplied
    BfDistribution null_dist;
};

double log_bf_value(int n, int k, double a, double b);
double bf_value(int n, int k, double a, double b);

BfDistribution bf_null_distribution(int n, double a, double b);

// Smallest x_k whose exact null exceedance P(BF > x_k | H0) is <= alpha;
// equivalently the (1-alpha)-quantile of the null BF distribution.
BfCritical bf_critical(int n, double alpha, double a, double b);

// P(BF > critical | V_S = v_s) = P(K > k_index), K ~ Binomial(n, v_s).
double power_at(int n, double v_s, const BfCritical& critical);

// Bisection solve of power_at(v) = 1 - beta on (1/2, 1); throws
// InfeasibleError (reporting the maximum achievable power) when no v works.
double solve_v_s(const ThresholdConfig& config);

double compute_eta(double v_y, double v_s);

// Full calibration: critical value, v_s, and eta when v_y is given.
ThresholdResult select_threshold(const ThresholdConfig& config,
                                 std::optional<double> v_y = std::nullopt);

} // namespace surro
