#include "surro/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "surro/errors.hpp"

namespace surro::math {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

// AS 241 algorithm PPND16.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        const double num =
            q * (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                      6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                    1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                  1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return num / den;
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Lentz continued fraction for I_x(a,b); valid for x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 3e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction failed to converge (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) +
                       ", x=" + std::to_string(x) + ")");
}

} // namespace

namespace {

// continued-fraction branch: log I_x(a,b) via the CF prefactor identity
double log_reg_inc_beta_cf(double a, double b, double x) {
    return a * std::log(x) + b * std::log1p(-x) - std::log(a) - log_beta(a, b) +
           std::log(beta_cf(a, b, x));
}

} // namespace

double log_reg_inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("incomplete beta: a, b must be > 0");
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (x >= 1.0) return 0.0;
    if (x < (a + 1.0) / (a + b + 2.0)) return log_reg_inc_beta_cf(a, b, x);
    const double comp = std::exp(log_reg_inc_beta_cf(b, a, 1.0 - x));
    if (comp >= 1.0) return -std::numeric_limits<double>::infinity();
    return std::log1p(-comp);
}

double reg_inc_beta(double a, double b, double x) {
    return std::exp(log_reg_inc_beta(a, b, x));
}

double incomplete_beta(double a, double b, double lo, double hi) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("incomplete beta: a, b must be > 0");
    if (!(lo <= hi)) throw DomainError("incomplete beta: lo must not exceed hi");
    const double clo = std::clamp(lo, 0.0, 1.0);
    const double chi = std::clamp(hi, 0.0, 1.0);
    return std::exp(log_beta(a, b)) * (reg_inc_beta(a, b, chi) - reg_inc_beta(a, b, clo));
}

double log_binom_tail_geq(int n, int m, double p) {
    if (m <= 0) return 0.0;
    if (m > n) return -std::numeric_limits<double>::infinity();
    // P(K >= m) = I_p(m, n - m + 1)
    return log_reg_inc_beta(static_cast<double>(m), static_cast<double>(n - m + 1), p);
}

double log_choose(int n, int k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

} // namespace surro::math
