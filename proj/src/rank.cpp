#include "surro/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surro/errors.hpp"
#include "surro/special.hpp"

namespace surro {

namespace {

// Midranks of the pooled sample; tie groups share the average position.
std::vector<double> midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    return rank;
}

// Per-unit placements of the kernel 1(t > c) + 1/2 1(t = c):
// for treated i the fraction of controls it beats, and symmetrically.
struct Placements {
    std::vector<double> treated; // length n1
    std::vector<double> control; // length n0
};

Placements placements(const std::vector<double>& t, const std::vector<double>& c) {
    std::vector<double> cs(c);
    std::sort(cs.begin(), cs.end());
    std::vector<double> ts(t);
    std::sort(ts.begin(), ts.end());
    Placements p;
    p.treated.resize(t.size());
    p.control.resize(c.size());
    const double n1 = static_cast<double>(t.size());
    const double n0 = static_cast<double>(c.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto lo = std::lower_bound(cs.begin(), cs.end(), t[i]) - cs.begin();
        const auto hi = std::upper_bound(cs.begin(), cs.end(), t[i]) - cs.begin();
        p.treated[i] = (static_cast<double>(lo) + 0.5 * static_cast<double>(hi - lo)) / n0;
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
        const auto gt = ts.end() - std::upper_bound(ts.begin(), ts.end(), c[j]);
        const auto eq = std::upper_bound(ts.begin(), ts.end(), c[j]) -
                        std::lower_bound(ts.begin(), ts.end(), c[j]);
        p.control[j] = (static_cast<double>(gt) + 0.5 * static_cast<double>(eq)) / n1;
    }
    return p;
}

double sample_variance(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

} // namespace

double mann_whitney_u(std::span<const double> treated, std::span<const double> control) {
    if (treated.empty()) throw ValidationError("mann_whitney_u: treated arm is empty");
    if (control.empty()) throw ValidationError("mann_whitney_u: control arm is empty");
    const std::size_t n1 = treated.size();
    const std::size_t n0 = control.size();
    std::vector<double> pooled(treated.begin(), treated.end());
    pooled.insert(pooled.end(), control.begin(), control.end());
    const std::vector<double> rank = midranks(pooled);
    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += rank[i];
    const double u = r1 - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
    return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

double delta_hat(const TrialData& data) {
    const std::vector<double> y1 = data.arm_values(1, false);
    const std::vector<double> y0 = data.arm_values(0, false);
    const std::vector<double> s1 = data.arm_values(1, true);
    const std::vector<double> s0 = data.arm_values(0, true);
    return mann_whitney_u(y1, y0) - mann_whitney_u(s1, s0);
}

DeltaVarianceComponents delta_variance_components(const TrialData& data) {
    if (data.n1() < 2 || data.n0() < 2)
        throw ValidationError("delta_variance: both arms need at least 2 units");

    const std::vector<double> y1 = data.arm_values(1, false);
    const std::vector<double> y0 = data.arm_values(0, false);
    const std::vector<double> s1 = data.arm_values(1, true);
    const std::vector<double> s0 = data.arm_values(0, true);

    const Placements py = placements(y1, y0);
    const Placements ps = placements(s1, s0);
    const double n1 = static_cast<double>(data.n1());
    const double n0 = static_cast<double>(data.n0());

    // pair-level kernel variance of the difference kernel h_y - h_s,
    // E[(h_y - h_s)^2] - mean^2 over all n1*n0 pairs
    const double u_y = mann_whitney_u(y1, y0);
    const double u_s = mann_whitney_u(s1, s0);
    auto kernel = [](double a, double b) { return a > b ? 1.0 : (a == b ? 0.5 : 0.0); };
    double zeta11_d = 0.0, zeta11_y = 0.0, zeta11_s = 0.0, zeta11_c = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i)
        for (std::size_t j = 0; j < y0.size(); ++j) {
            const double hy = kernel(y1[i], y0[j]) - u_y;
            const double hs = kernel(s1[i], s0[j]) - u_s;
            zeta11_y += hy * hy;
            zeta11_s += hs * hs;
            zeta11_c += hy * hs;
            zeta11_d += (hy - hs) * (hy - hs);
        }
    const double npairs = n1 * n0;
    zeta11_y /= npairs;
    zeta11_s /= npairs;
    zeta11_c /= npairs;
    zeta11_d /= npairs;

    std::vector<double> diff_t(py.treated.size()), diff_c(py.control.size());
    for (std::size_t i = 0; i < diff_t.size(); ++i) diff_t[i] = py.treated[i] - ps.treated[i];
    for (std::size_t j = 0; j < diff_c.size(); ++j) diff_c[j] = py.control[j] - ps.control[j];

    // Var(U_hat) >= zeta11 / (n1 n0) holds exactly (the projection
    // components are nonnegative), so the kernel term floors the estimate
    auto projection = [&](const std::vector<double>& a, const std::vector<double>& b,
                          double zeta11) {
        const double est = sample_variance(a) / n1 + sample_variance(b) / n0 -
                           zeta11 / (n1 * n0);
        return std::max(est, zeta11 / (n1 * n0));
    };

    DeltaVarianceComponents out;
    out.var_u_y = projection(py.treated, py.control, zeta11_y);
    out.var_u_s = projection(ps.treated, ps.control, zeta11_s);
    out.var_delta = projection(diff_t, diff_c, zeta11_d);
    // covariance from the polarization identity of the shared components
    out.cov_u_y_u_s = 0.5 * (out.var_u_y + out.var_u_s - out.var_delta);
    return out;
}

double delta_variance(const TrialData& data) {
    return delta_variance_components(data).var_delta;
}

double delta_variance_bootstrap(const TrialData& data, int resamples, math::RngStream& rng) {
    if (data.n1() < 2 || data.n0() < 2)
        throw ValidationError("delta_variance_bootstrap: both arms need at least 2 units");
    std::vector<std::size_t> treated_idx, control_idx;
    for (std::size_t i = 0; i < data.n(); ++i)
        (data.record(i).z == 1 ? treated_idx : control_idx).push_back(i);

    std::vector<double> deltas;
    deltas.reserve(resamples);
    std::vector<double> y1(treated_idx.size()), s1(treated_idx.size());
    std::vector<double> y0(control_idx.size()), s0(control_idx.size());
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < treated_idx.size(); ++i) {
            const std::size_t pick =
                treated_idx[static_cast<std::size_t>(rng.uniform() * treated_idx.size())];
            y1[i] = data.record(pick).y;
            s1[i] = data.record(pick).s;
        }
        for (std::size_t j = 0; j < control_idx.size(); ++j) {
            const std::size_t pick =
                control_idx[static_cast<std::size_t>(rng.uniform() * control_idx.size())];
            y0[j] = data.record(pick).y;
            s0[j] = data.record(pick).s;
        }
        deltas.push_back(mann_whitney_u(y1, y0) - mann_whitney_u(s1, s0));
    }
    return sample_variance(deltas);
}

double mw_detectable_u(std::size_t n1, std::size_t n0, double alpha, double beta) {
    if (n1 < 1 || n0 < 1) throw ValidationError("mw_detectable_u: both arms must be nonempty");
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw DomainError("mw_detectable_u: alpha and beta must lie in (0,1)");
    const double fn1 = static_cast<double>(n1);
    const double fn0 = static_cast<double>(n0);
    const double null_sd = std::sqrt((fn1 + fn0 + 1.0) / (12.0 * fn1 * fn0));
    const double u =
        0.5 + (math::normal_quantile(1.0 - alpha) + math::normal_quantile(1.0 - beta)) * null_sd;
    return std::min(u, 1.0 - 1e-12);
}

RankTestResult rank_test(const TrialData& data, double epsilon, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("rank_test: alpha must lie in (0,1)");
    const std::vector<double> y1 = data.arm_values(1, false);
    const std::vector<double> y0 = data.arm_values(0, false);
    const std::vector<double> s1 = data.arm_values(1, true);
    const std::vector<double> s0 = data.arm_values(0, true);

    RankTestResult r;
    r.u_y = mann_whitney_u(y1, y0);
    r.u_s = mann_whitney_u(s1, s0);
    r.delta_hat = r.u_y - r.u_s;
    r.variance = delta_variance(data);
    r.ci_upper = r.delta_hat + math::normal_quantile(1.0 - alpha) * std::sqrt(r.variance);
    r.epsilon = epsilon;
    r.decision = (r.ci_upper < epsilon) ? Decision::Valid : Decision::NotValid;
    return r;
}

} // namespace surro
