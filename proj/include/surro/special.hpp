#pragma once

#include <vector>

namespace surro::math {

// Standard normal CDF; absolute error below 1e-14 on finite input.
double normal_cdf(double x);

// Inverse standard normal CDF (Wichura's PPND16); p in (0,1).
double normal_quantile(double p);

// log Beta(a, b)
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// log variant stays finite deep in the tails (I_x down to ~1e-300000).
double reg_inc_beta(double a, double b, double x);
double log_reg_inc_beta(double a, double b, double x);

// Unregularized integral of v^{a-1}(1-v)^{b-1} over [lo, hi] in [0,1].
// Relative error <= 1e-10 away from catastrophic lo~hi cancellation.
double incomplete_beta(double a, double b, double lo, double hi);

// Binomial upper tails, log scale: log P(K >= m), K ~ Binomial(n, p).
double log_binom_tail_geq(int n, int m, double p);

// log C(n, k)
double log_choose(int n, int k);

// log(sum(exp(v))) without overflow.
double log_sum_exp(const std::vector<double>& v);

} // namespace surro::math
