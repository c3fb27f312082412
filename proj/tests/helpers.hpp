#pragma once

// Shared test utilities: independent oracles (high-precision normal CDF,
// brute-force U statistic), Kolmogorov-Smirnov helpers, and a small
// subprocess harness for the CLI binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

// Series/asymptotic evaluation of the standard normal CDF in long double;
// independent of the library implementation (which uses erfc).
inline long double normal_cdf_oracle(long double x) {
    const long double ax = std::fabs(x);
    if (ax < 15.0L) {
        // Phi(x) = 1/2 + phi(x) * sum_k x^(2k+1) / (1*3*...*(2k+1))
        long double term = ax;
        long double sum = ax;
        for (int k = 1; k < 500; ++k) {
            term *= ax * ax / (2.0L * k + 1.0L);
            sum += term;
            if (term < 1e-25L * sum) break;
        }
        const long double phi =
            std::exp(-0.5L * ax * ax) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
        const long double upper = 0.5L + phi * sum;
        return x >= 0 ? upper : 1.0L - upper;
    }
    // asymptotic tail: 1 - Phi(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    const long double phi =
        std::exp(-0.5L * ax * ax) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    long double s = 1.0L, term = 1.0L;
    for (int k = 1; k < 20; ++k) {
        term *= -(2.0L * k - 1.0L) / (ax * ax);
        s += term;
    }
    const long double tail = phi / ax * s;
    return x >= 0 ? 1.0L - tail : tail;
}

// O(n1*n0) double loop with the half-credit tie rule.
inline double u_bruteforce(const std::vector<double>& treated,
                           const std::vector<double>& control) {
    double sum = 0.0;
    for (double t : treated)
        for (double c : control) sum += t > c ? 1.0 : (t == c ? 0.5 : 0.0);
    return sum / (static_cast<double>(treated.size()) * static_cast<double>(control.size()));
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

// Asymptotic Kolmogorov distribution: P(sqrt(n) D > lambda).
inline double kolmogorov_pvalue(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample KS p-value against a CDF evaluated by `cdf`.
template <typename Cdf>
double ks_test_pvalue(std::vector<double> sample, Cdf cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return kolmogorov_pvalue(std::sqrt(n) * d);
}

// Two-sample KS p-value.
inline double ks2_test_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return kolmogorov_pvalue(d * std::sqrt(na * nb / (na + nb)));
}

// ---- CLI subprocess harness ----------------------------------------------

struct CliResult {
    int exit_code;
    std::string stdout_text;
    std::string stderr_text;
};

inline std::string test_tmp_dir() {
#ifdef SURRO_TEST_TMP
    static const std::string dir = [] {
        std::string d = SURRO_TEST_TMP;
        if (std::system(("mkdir -p '" + d + "'").c_str()) != 0) d = ".";
        return d;
    }();
    return dir;
#else
    return ".";
#endif
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CliResult run_cli(const std::string& args) {
#ifdef SURRO_CLI_PATH
    const std::string bin = SURRO_CLI_PATH;
#else
    const std::string bin = "surro";
#endif
    const std::string out = test_tmp_dir() + "/cli_stdout.txt";
    const std::string err = test_tmp_dir() + "/cli_stderr.txt";
    const std::string cmd = "'" + bin + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.stdout_text = slurp(out);
    r.stderr_text = slurp(err);
    return r;
}

} // namespace testutil
