#include "surro/mvn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace surro::math {

CorrelationMatrix::CorrelationMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw ValidationError("correlation matrix must be square");
    if (!m_.is_symmetric(1e-10)) throw ValidationError("correlation matrix must be symmetric");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        if (std::fabs(m_(i, i) - 1.0) > 1e-12)
            throw ValidationError("correlation matrix must have unit diagonal");
    try {
        (void)cholesky(m_); // pivot tolerance enforces positive definiteness
    } catch (const NumericError& e) {
        throw ValidationError(std::string("correlation matrix not positive definite: ") +
                              e.what());
    }
}

ConditionalMoments mvn_conditional(const Vector& mu, const Matrix& sigma,
                                   const std::vector<std::size_t>& observed_idx,
                                   const Vector& observed_vals) {
    const std::size_t k = mu.size();
    if (sigma.rows() != k || sigma.cols() != k)
        throw DomainError("mvn_conditional: sigma shape does not match mu");
    if (observed_idx.empty() || observed_idx.size() >= k)
        throw DomainError("mvn_conditional: observed set must be a nonempty proper subset");
    if (observed_vals.size() != observed_idx.size())
        throw DomainError("mvn_conditional: observed values/index length mismatch");

    std::vector<bool> is_obs(k, false);
    for (std::size_t idx : observed_idx) {
        if (idx >= k) throw DomainError("mvn_conditional: index out of range");
        if (is_obs[idx]) throw DomainError("mvn_conditional: duplicate observed index");
        is_obs[idx] = true;
    }
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < k; ++i)
        if (!is_obs[i]) free_idx.push_back(i);

    const std::size_t no = observed_idx.size();
    const std::size_t nf = free_idx.size();

    Matrix s_oo(no, no), s_fo(nf, no), s_ff(nf, nf);
    for (std::size_t i = 0; i < no; ++i)
        for (std::size_t j = 0; j < no; ++j) s_oo(i, j) = sigma(observed_idx[i], observed_idx[j]);
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < no; ++j) s_fo(i, j) = sigma(free_idx[i], observed_idx[j]);
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nf; ++j) s_ff(i, j) = sigma(free_idx[i], free_idx[j]);

    Matrix l_oo;
    try {
        l_oo = cholesky(s_oo);
    } catch (const NumericError& e) {
        std::string names;
        for (std::size_t idx : observed_idx) names += " " + std::to_string(idx);
        throw NumericError("mvn_conditional: observed block {" + names +
                           " } is singular (" + e.what() + ")");
    }

    Vector resid(no);
    for (std::size_t i = 0; i < no; ++i) resid[i] = observed_vals[i] - mu[observed_idx[i]];
    const Vector w = cholesky_solve(l_oo, resid); // S_oo^{-1} (obs - mu_o)

    ConditionalMoments out;
    out.free_idx = free_idx;
    out.mean.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        double m = mu[free_idx[i]];
        for (std::size_t j = 0; j < no; ++j) m += s_fo(i, j) * w[j];
        out.mean[i] = m;
    }

    // S_ff - S_fo S_oo^{-1} S_of, via K = S_oo^{-1} S_of
    Matrix kmat(no, nf);
    Vector col(no);
    for (std::size_t j = 0; j < nf; ++j) {
        for (std::size_t i = 0; i < no; ++i) col[i] = s_fo(j, i);
        const Vector kj = cholesky_solve(l_oo, col);
        for (std::size_t i = 0; i < no; ++i) kmat(i, j) = kj[i];
    }
    out.cov = s_ff;
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nf; ++j) {
            double s = 0.0;
            for (std::size_t m = 0; m < no; ++m) s += s_fo(i, m) * kmat(m, j);
            out.cov(i, j) -= s;
        }
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = i + 1; j < nf; ++j) {
            const double v = 0.5 * (out.cov(i, j) + out.cov(j, i));
            out.cov(i, j) = out.cov(j, i) = v;
        }
    return out;
}

Vector sample_mvn(const Vector& mu, const Matrix& sigma, RngStream& rng) {
    const Matrix l = cholesky(sigma);
    const std::size_t k = mu.size();
    Vector z(k);
    for (auto& v : z) v = rng.normal();
    Vector x(mu);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) x[i] += l(i, j) * z[j];
    return x;
}

Matrix corr_cholesky_from_cpc(const std::vector<double>& z, std::size_t k) {
    if (z.size() != k * (k - 1) / 2)
        throw DomainError("corr_cholesky_from_cpc: wrong number of partial correlations");
    Matrix l(k, k);
    l(0, 0) = 1.0;
    std::size_t pos = 0;
    // column-major over (i, j), j < i
    std::vector<std::vector<double>> cpc(k, std::vector<double>(k, 0.0));
    for (std::size_t j = 0; j + 1 < k; ++j)
        for (std::size_t i = j + 1; i < k; ++i) cpc[i][j] = z[pos++];

    for (std::size_t i = 1; i < k; ++i) {
        double sumsq = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double rem = std::max(1.0 - sumsq, 0.0);
            l(i, j) = cpc[i][j] * std::sqrt(rem);
            sumsq += l(i, j) * l(i, j);
        }
        l(i, i) = std::sqrt(std::max(1.0 - sumsq, 0.0));
    }
    return l;
}

double lkj_cpc_beta_param(double tau, std::size_t k, std::size_t column) {
    return tau + (static_cast<double>(k) - 2.0 - static_cast<double>(column)) / 2.0;
}

CorrelationMatrix sample_lkj(double tau, std::size_t k, RngStream& rng) {
    if (tau <= 0.0) throw DomainError("sample_lkj: tau must be > 0");
    if (k < 2) throw DomainError("sample_lkj: dimension must be >= 2");
    std::vector<double> z;
    z.reserve(k * (k - 1) / 2);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        const double alpha = lkj_cpc_beta_param(tau, k, j);
        for (std::size_t i = j + 1; i < k; ++i) z.push_back(2.0 * rng.beta(alpha, alpha) - 1.0);
    }
    const Matrix l = corr_cholesky_from_cpc(z, k);
    Matrix omega = l * l.transposed();
    for (std::size_t i = 0; i < k; ++i) omega(i, i) = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const double v = 0.5 * (omega(i, j) + omega(j, i));
            omega(i, j) = omega(j, i) = v;
        }
    return CorrelationMatrix(std::move(omega));
}

} // namespace surro::math
