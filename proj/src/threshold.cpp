#include "surro/threshold.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "surro/errors.hpp"
#include "surro/special.hpp"

namespace surro {

using math::log_binom_tail_geq;
using math::log_choose;
using math::log_reg_inc_beta;
using math::log_beta;

namespace {

constexpr double kLn2 = 0.6931471805599453094;

// log of the unregularized incomplete beta over [1/2, 1]:
// B(a,b) * (1 - I_{1/2}(a,b)) = B(a,b) * I_{1/2}(b,a).
double log_beta_upper_half(double a, double b) {
    return log_beta(a, b) + log_reg_inc_beta(b, a, 0.5);
}

} // namespace

void ThresholdConfig::validate() const {
    if (n < 1) throw DomainError("threshold: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("threshold: alpha must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("threshold: beta must lie in (0,1)");
    if (!(a > 0.0 && b > 0.0)) throw DomainError("threshold: prior parameters a, b must be > 0");
}

double BfDistribution::bf(int k) const { return std::exp(log_bf.at(k)); }

double log_bf_value(int n, int k, double a, double b) {
    if (n < 1) throw DomainError("bf_value: n must be >= 1");
    if (k < 0 || k > n) throw DomainError("bf_value: k must lie in [0, n]");
    if (!(a > 0.0 && b > 0.0)) throw DomainError("bf_value: a, b must be > 0");
    return n * kLn2 + log_beta_upper_half(a + k, b + n - k) - log_beta_upper_half(a, b);
}

double bf_value(int n, int k, double a, double b) {
    return std::exp(log_bf_value(n, k, a, b));
}

BfDistribution bf_null_distribution(int n, double a, double b) {
    if (n < 1) throw DomainError("bf_null_distribution: n must be >= 1");
    BfDistribution out;
    out.log_bf.resize(n + 1);
    out.prob.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        out.log_bf[k] = log_bf_value(n, k, a, b);
        out.prob[k] = std::exp(log_choose(n, k) - n * kLn2);
    }
    return out;
}

BfCritical bf_critical(int n, double alpha, double a, double b) {
    ThresholdConfig{n, alpha, 0.5, a, b}.validate();
    // exceedance at x_k is P(K > k) = P(K >= k+1), K ~ Binomial(n, 1/2);
    // monotone decreasing in k, and zero at k = n.
    int k = n;
    double tail = 0.0;
    for (int cand = 0; cand <= n; ++cand) {
        const double t = (cand == n)
                             ? 0.0
                             : std::exp(log_binom_tail_geq(n, cand + 1, 0.5));
        if (t <= alpha) {
            k = cand;
            tail = t;
            break;
        }
    }
    BfCritical crit;
    crit.k_index = k;
    crit.log_critical = log_bf_value(n, k, a, b);
    crit.critical = std::exp(crit.log_critical);
    crit.attained_level = tail;
    return crit;
}

double power_at(int n, double v_s, const BfCritical& critical) {
    if (!(v_s > 0.0 && v_s < 1.0)) throw DomainError("power_at: v_s must lie in (0,1)");
    if (critical.k_index >= n) return 0.0;
    return std::exp(log_binom_tail_geq(n, critical.k_index + 1, v_s));
}

double solve_v_s(const ThresholdConfig& config) {
    config.validate();
    const BfCritical crit = bf_critical(config.n, config.alpha, config.a, config.b);
    const double target = 1.0 - config.beta;

    const double hi_probe = 1.0 - 1e-13;
    const double max_power = power_at(config.n, hi_probe, crit);
    if (max_power < target)
        throw InfeasibleError("threshold: target power " + std::to_string(target) +
                              " unreachable at n=" + std::to_string(config.n) +
                              "; maximum achievable power is " + std::to_string(max_power));

    double lo = 0.5;
    double hi = hi_probe;
    // power is continuous and strictly increasing in v on (1/2, 1)
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (power_at(config.n, mid, crit) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double compute_eta(double v_y, double v_s) {
    if (!(v_y >= 0.0 && v_y <= 1.0 && v_s >= 0.0 && v_s <= 1.0))
        throw DomainError("compute_eta: probabilities must lie in [0,1]");
    return std::max(v_y - v_s, 0.0);
}

ThresholdResult select_threshold(const ThresholdConfig& config, std::optional<double> v_y) {
    config.validate();
    ThresholdResult res;
    res.config = config;
    res.critical = bf_critical(config.n, config.alpha, config.a, config.b);
    res.v_s = solve_v_s(config);
    res.null_dist = bf_null_distribution(config.n, config.a, config.b);
    if (v_y) {
        res.v_y = *v_y;
        res.eta = compute_eta(*v_y, res.v_s);
    }
    return res;
}

} // namespace surro
