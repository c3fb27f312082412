#include "surro/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "surro/errors.hpp"
#include "surro/special.hpp"

namespace surro {

using math::Matrix;
using math::Vector;

namespace {

constexpr double kAcceptTarget = 0.35; // coordinate-wise target, inside the 20-40% band

double stable_log1m_tanh_sq(double y) {
    // log(1 - tanh(y)^2) = log 4 - 2(|y| + log1p(exp(-2|y|)))
    const double a = std::fabs(y);
    return 1.3862943611198906188 - 2.0 * (a + std::log1p(std::exp(-2.0 * a)));
}

double mean_of(const std::vector<double>& v, std::size_t from) {
    double s = 0.0;
    for (std::size_t i = from; i < v.size(); ++i) s += v[i];
    return s / static_cast<double>(v.size() - from);
}

} // namespace

ChainSampler::ChainSampler(const TrialData& data, const ModelPriors& priors, BayesModel model,
                           math::RngStream rng, bool intercept)
    : n_(data.n()), table_(PotentialTable::from_trial(data)), model_(model), priors_(priors),
      rng_(rng) {
    priors_.validate();
    if (model_ == BayesModel::Covariates) {
        if (data.covariate_dim() < 1)
            throw ValidationError("covariate model requires at least one covariate");
        dprime_ = data.covariate_dim() + (intercept ? 1 : 0);
        design_ = Matrix(n_, dprime_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t col = 0;
            if (intercept) design_(i, col++) = 1.0;
            for (double xv : data.record(i).x) design_(i, col++) = xv;
        }
        mu_beta_ = priors_.mu_beta.empty() ? Vector(dprime_, 0.0) : priors_.mu_beta;
        Matrix sb = (priors_.sigma_beta.rows() == 0)
                        ? ModelPriors::scaled_identity(dprime_, 10.0)
                        : priors_.sigma_beta;
        if (mu_beta_.size() != dprime_ || sb.rows() != dprime_)
            throw DomainError("coefficient prior dimension does not match the design");
        sigma_beta_inv_ = math::spd_inverse(sb);
        mean_flat_.assign(4 * dprime_, 0.0);
    } else {
        dprime_ = 0;
        mean_flat_.assign(4, 0.0);
    }
    sigma0_inv_ = math::spd_inverse(priors_.sigma0);

    // moment-based starting point from the observed halves
    double m[4] = {0, 0, 0, 0}, ss[4] = {0, 0, 0, 0};
    std::size_t cnt[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < n_; ++i) {
        const bool treated = table_.observed_arm[i] == ObservedArm::Treated;
        const std::size_t base = treated ? 0 : 2;
        for (std::size_t k = base; k < base + 2; ++k) {
            m[k] += table_.rows[i][k];
            ++cnt[k];
        }
    }
    for (int k = 0; k < 4; ++k) m[k] /= std::max<std::size_t>(cnt[k], 1);
    for (std::size_t i = 0; i < n_; ++i) {
        const bool treated = table_.observed_arm[i] == ObservedArm::Treated;
        const std::size_t base = treated ? 0 : 2;
        for (std::size_t k = base; k < base + 2; ++k)
            ss[k] += (table_.rows[i][k] - m[k]) * (table_.rows[i][k] - m[k]);
    }
    for (int k = 0; k < 4; ++k) {
        const double sd = cnt[k] > 1 ? std::sqrt(ss[k] / (cnt[k] - 1)) : 1.0;
        log_sigma_[k] = std::log(std::max(sd, 1e-3));
    }
    if (model_ == BayesModel::Covariates) {
        for (int k = 0; k < 4; ++k) mean_flat_[k * dprime_] = m[k]; // intercept column
    } else {
        for (int k = 0; k < 4; ++k) mean_flat_[k] = m[k];
    }
    cpc_raw_.fill(0.0); // identity correlation
    rebuild_cov_cache();
}

void ChainSampler::rebuild_cov_cache() {
    for (int k = 0; k < 4; ++k) sigma_[k] = std::exp(log_sigma_[k]);
    std::vector<double> z(6);
    for (int m = 0; m < 6; ++m) z[m] = std::tanh(cpc_raw_[m]);
    const Matrix l = math::corr_cholesky_from_cpc(z, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            corr_chol_[i][j] = l(i, j);
            sigma_chol_[i][j] = sigma_[i] * l(i, j);
        }
}

void ChainSampler::mean_of_unit(std::size_t i, double out[4]) const {
    if (model_ == BayesModel::NoCovariates) {
        for (int k = 0; k < 4; ++k) out[k] = mean_flat_[k];
    } else {
        for (int k = 0; k < 4; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < dprime_; ++j)
                s += mean_flat_[k * dprime_ + j] * design_(i, j);
            out[k] = s;
        }
    }
}

double ChainSampler::log_target_cov(const std::array<double, 4>& log_sigma,
                                    const std::array<double, 6>& cpc_raw) const {
    double sig[4];
    for (int k = 0; k < 4; ++k) {
        if (log_sigma[k] > 45.0 || log_sigma[k] < -45.0) return -HUGE_VAL;
        sig[k] = std::exp(log_sigma[k]);
    }
    std::vector<double> z(6);
    for (int m = 0; m < 6; ++m) z[m] = std::tanh(cpc_raw[m]);
    const Matrix l = math::corr_cholesky_from_cpc(z, 4);

    // correlation states are kept away from exact singularity; the
    // conditional solves downstream require an invertible factor
    for (int k = 0; k < 4; ++k)
        if (!(l(k, k) > 1e-6)) return -HUGE_VAL;

    double lp = 0.0;
    // half-normal scales plus the log-sigma Jacobian
    const double s2 = priors_.s * priors_.s;
    for (int k = 0; k < 4; ++k) lp += -0.5 * sig[k] * sig[k] / s2 + log_sigma[k];
    // LKJ(tau) pulled back through the tanh/CPC map: each cell in column j
    // contributes alpha_j * log(1 - z^2)
    int m = 0;
    for (int j = 0; j + 1 < 4; ++j) {
        const double alpha = math::lkj_cpc_beta_param(priors_.tau, 4, j);
        for (int i = j + 1; i < 4; ++i, ++m) lp += alpha * stable_log1m_tanh_sq(cpc_raw[m]);
    }

    if (!likelihood_on_) return lp;

    // observed-data likelihood: each unit contributes its observed 2x2
    // marginal block, (y1,s1) for treated and (y0,s0) for controls; the
    // never-jointly-observed correlations enter through the prior only
    double sigma_full[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k <= j; ++k) s += sig[i] * l(i, k) * sig[j] * l(j, k);
            sigma_full[i][j] = sigma_full[j][i] = s;
        }

    double lp_lik = 0.0;
    double mu_i[4];
    for (int arm = 0; arm < 2; ++arm) {
        const std::size_t base = arm == 0 ? 0 : 2; // treated block first
        const double s00 = sigma_full[base][base];
        const double s01 = sigma_full[base][base + 1];
        const double s11 = sigma_full[base + 1][base + 1];
        if (!(s00 > 0.0)) return -HUGE_VAL;
        const double t00 = std::sqrt(s00);
        const double t10 = s01 / t00;
        const double piv = s11 - t10 * t10;
        if (!(piv > 0.0)) return -HUGE_VAL;
        const double t11 = std::sqrt(piv);
        const double logdet_block = std::log(t00) + std::log(t11);
        const ObservedArm want = arm == 0 ? ObservedArm::Treated : ObservedArm::Control;

        double quad = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (table_.observed_arm[i] != want) continue;
            mean_of_unit(i, mu_i);
            const double r0 = table_.rows[i][base] - mu_i[base];
            const double r1 = table_.rows[i][base + 1] - mu_i[base + 1];
            const double w0 = r0 / t00;
            const double w1 = (r1 - t10 * w0) / t11;
            quad += w0 * w0 + w1 * w1;
            ++count;
        }
        lp_lik += -static_cast<double>(count) * logdet_block - 0.5 * quad;
    }
    return lp + lp_lik;
}

void ChainSampler::impute_unit(std::size_t i) {
    const bool treated = table_.observed_arm[i] == ObservedArm::Treated;
    const std::size_t ob = treated ? 0 : 2; // observed base index
    const std::size_t ub = treated ? 2 : 0;

    double sig[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double s = 0.0;
            for (int k = 0; k <= std::min(r, c); ++k) s += sigma_chol_[r][k] * sigma_chol_[c][k];
            sig[r][c] = s;
        }

    const double o00 = sig[ob][ob], o01 = sig[ob][ob + 1], o11 = sig[ob + 1][ob + 1];
    const double det = o00 * o11 - o01 * o01;
    if (!(det > 0.0) || !(o00 > 0.0))
        throw NumericError("imputation: observed 2x2 block is singular");

    // K = Sigma_uo Sigma_oo^{-1}
    double kmat[2][2];
    const double u0o0 = sig[ub][ob], u0o1 = sig[ub][ob + 1];
    const double u1o0 = sig[ub + 1][ob], u1o1 = sig[ub + 1][ob + 1];
    kmat[0][0] = (u0o0 * o11 - u0o1 * o01) / det;
    kmat[0][1] = (u0o1 * o00 - u0o0 * o01) / det;
    kmat[1][0] = (u1o0 * o11 - u1o1 * o01) / det;
    kmat[1][1] = (u1o1 * o00 - u1o0 * o01) / det;

    double cmat[2][2];
    cmat[0][0] = sig[ub][ub] - (kmat[0][0] * u0o0 + kmat[0][1] * u0o1);
    cmat[0][1] = sig[ub][ub + 1] - (kmat[0][0] * u1o0 + kmat[0][1] * u1o1);
    cmat[1][0] = cmat[0][1];
    cmat[1][1] = sig[ub + 1][ub + 1] - (kmat[1][0] * u1o0 + kmat[1][1] * u1o1);

    const double c00 = cmat[0][0];
    if (!(c00 >= 0.0)) throw NumericError("imputation: conditional covariance is not PSD");
    const double ch00 = std::sqrt(std::max(c00, 0.0));
    const double ch10 = ch00 > 0.0 ? cmat[1][0] / ch00 : 0.0;
    const double ch11 = std::sqrt(std::max(cmat[1][1] - ch10 * ch10, 0.0));

    double mu_i[4];
    mean_of_unit(i, mu_i);
    const double d0 = table_.rows[i][ob] - mu_i[ob];
    const double d1 = table_.rows[i][ob + 1] - mu_i[ob + 1];
    const double m0 = mu_i[ub] + kmat[0][0] * d0 + kmat[0][1] * d1;
    const double m1 = mu_i[ub + 1] + kmat[1][0] * d0 + kmat[1][1] * d1;

    const double z0 = rng_.normal();
    const double z1 = rng_.normal();
    table_.rows[i][ub] = m0 + ch00 * z0;
    table_.rows[i][ub + 1] = m1 + ch10 * z0 + ch11 * z1;
}

void ChainSampler::impute_all() {
    for (std::size_t i = 0; i < n_; ++i) impute_unit(i);
}

void ChainSampler::update_mean() {
    // conjugate draw conditioned on the observed halves: treated units
    // inform coordinates (y1, s1) through the (0,1) block of Sigma, controls
    // inform (y0, s0) through the (2,3) block
    double sigma_full[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = 0.0;
            for (int k = 0; k <= j; ++k) s += sigma_chol_[i][k] * sigma_chol_[j][k];
            sigma_full[i][j] = sigma_full[j][i] = s;
        }
    double blk_inv[2][2][2]; // per-arm inverse of the observed 2x2 block
    for (int arm = 0; arm < 2; ++arm) {
        const int base = arm == 0 ? 0 : 2;
        const double s00 = sigma_full[base][base];
        const double s01 = sigma_full[base][base + 1];
        const double s11 = sigma_full[base + 1][base + 1];
        const double det = s00 * s11 - s01 * s01;
        if (!(det > 0.0)) throw NumericError("update_mean: observed block is singular");
        blk_inv[arm][0][0] = s11 / det;
        blk_inv[arm][0][1] = blk_inv[arm][1][0] = -s01 / det;
        blk_inv[arm][1][1] = s00 / det;
    }

    if (model_ == BayesModel::NoCovariates) {
        Matrix lambda = sigma0_inv_;
        Vector rhs = sigma0_inv_ * priors_.mu0;
        if (likelihood_on_) {
            double obs_sum[2][2] = {{0, 0}, {0, 0}};
            std::size_t counts[2] = {0, 0};
            for (std::size_t i = 0; i < n_; ++i) {
                const int arm = table_.observed_arm[i] == ObservedArm::Treated ? 0 : 1;
                const std::size_t base = arm == 0 ? 0 : 2;
                obs_sum[arm][0] += table_.rows[i][base];
                obs_sum[arm][1] += table_.rows[i][base + 1];
                ++counts[arm];
            }
            for (int arm = 0; arm < 2; ++arm) {
                const int base = arm == 0 ? 0 : 2;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        lambda(base + a, base + b) +=
                            static_cast<double>(counts[arm]) * blk_inv[arm][a][b];
                        rhs[base + a] += blk_inv[arm][a][b] * obs_sum[arm][b];
                    }
            }
        }
        const Matrix lchol = math::cholesky(lambda);
        const Vector mean = math::cholesky_solve(lchol, rhs);
        Vector zvec(4);
        for (auto& z : zvec) z = rng_.normal();
        const Vector noise = math::solve_upper_transposed(lchol, zvec);
        for (int k = 0; k < 4; ++k) mean_flat_[k] = mean[k] + noise[k];
        return;
    }

    // coefficient model: b = vec(B) with entry k + 4j; each arm contributes
    // X'X (x) blk_inv on its observed coordinate pair
    const std::size_t q = 4 * dprime_;
    Matrix lambda(q, q);
    for (std::size_t j = 0; j < dprime_; ++j)
        for (std::size_t j2 = 0; j2 < dprime_; ++j2)
            for (int k = 0; k < 4; ++k)
                lambda(k + 4 * j, k + 4 * j2) = sigma_beta_inv_(j, j2);
    Vector rhs(q, 0.0);
    const Vector prior_term = sigma_beta_inv_ * mu_beta_;
    for (std::size_t j = 0; j < dprime_; ++j)
        for (int k = 0; k < 4; ++k) rhs[k + 4 * j] = prior_term[j];

    if (likelihood_on_) {
        Matrix xtx[2] = {Matrix(dprime_, dprime_), Matrix(dprime_, dprime_)};
        Matrix cross[2] = {Matrix(2, dprime_), Matrix(2, dprime_)};
        for (std::size_t i = 0; i < n_; ++i) {
            const int arm = table_.observed_arm[i] == ObservedArm::Treated ? 0 : 1;
            const std::size_t base = arm == 0 ? 0 : 2;
            for (std::size_t a = 0; a < dprime_; ++a) {
                const double xa = design_(i, a);
                for (std::size_t b = 0; b < dprime_; ++b) xtx[arm](a, b) += xa * design_(i, b);
                cross[arm](0, a) += table_.rows[i][base] * xa;
                cross[arm](1, a) += table_.rows[i][base + 1] * xa;
            }
        }
        for (int arm = 0; arm < 2; ++arm) {
            const int base = arm == 0 ? 0 : 2;
            for (std::size_t j = 0; j < dprime_; ++j)
                for (std::size_t j2 = 0; j2 < dprime_; ++j2)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            lambda(base + a + 4 * j, base + b + 4 * j2) +=
                                xtx[arm](j, j2) * blk_inv[arm][a][b];
            for (std::size_t j = 0; j < dprime_; ++j)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        rhs[base + a + 4 * j] += blk_inv[arm][a][b] * cross[arm](b, j);
        }
    }

    const Matrix lchol = math::cholesky(lambda);
    const Vector mean = math::cholesky_solve(lchol, rhs);
    Vector zvec(q);
    for (auto& z : zvec) z = rng_.normal();
    const Vector noise = math::solve_upper_transposed(lchol, zvec);
    for (std::size_t j = 0; j < dprime_; ++j)
        for (int k = 0; k < 4; ++k)
            mean_flat_[static_cast<std::size_t>(k) * dprime_ + j] =
                mean[k + 4 * j] + noise[k + 4 * j];
}

void ChainSampler::update_covariance() {
    // coordinate-wise random-walk sweep with per-coordinate adapted scales;
    // identified and loosely identified coordinates have very different
    // conditional widths
    double lt = log_target_cov(log_sigma_, cpc_raw_);
    ++adapt_count_;
    const double gamma = adapting_ ? 1.0 / std::sqrt(static_cast<double>(adapt_count_)) : 0.0;

    int accepted = 0;
    for (int k = 0; k < 4; ++k) {
        std::array<double, 4> prop = log_sigma_;
        prop[k] += scale_sigma_[k] * rng_.normal();
        const double lt_prop = log_target_cov(prop, cpc_raw_);
        const double log_ratio = lt_prop - lt;
        const double accept_prob = std::min(1.0, std::exp(std::min(log_ratio, 0.0)));
        if (std::log(rng_.uniform()) < log_ratio) {
            log_sigma_ = prop;
            lt = lt_prop;
            ++accepted;
        }
        if (adapting_) scale_sigma_[k] *= std::exp(gamma * (accept_prob - kAcceptTarget));
    }
    last_accept_sigma_ = accepted / 4.0;

    accepted = 0;
    for (int m = 0; m < 6; ++m) {
        std::array<double, 6> prop = cpc_raw_;
        prop[m] += scale_corr_[m] * rng_.normal();
        const double lt_prop = log_target_cov(log_sigma_, prop);
        const double log_ratio = lt_prop - lt;
        const double accept_prob = std::min(1.0, std::exp(std::min(log_ratio, 0.0)));
        if (std::log(rng_.uniform()) < log_ratio) {
            cpc_raw_ = prop;
            lt = lt_prop;
            ++accepted;
        }
        if (adapting_) scale_corr_[m] *= std::exp(gamma * (accept_prob - kAcceptTarget));
    }
    last_accept_corr_ = accepted / 6.0;
    rebuild_cov_cache();
}

void ChainSampler::step() {
    impute_all();
    update_mean();
    update_covariance();
}

double ChainSampler::v_y_hat() const {
    std::size_t wins = 0;
    for (std::size_t i = 0; i < n_; ++i) wins += table_.rows[i][0] > table_.rows[i][2];
    return static_cast<double>(wins) / static_cast<double>(n_);
}

double ChainSampler::v_s_hat() const {
    std::size_t wins = 0;
    for (std::size_t i = 0; i < n_; ++i) wins += table_.rows[i][1] > table_.rows[i][3];
    return static_cast<double>(wins) / static_cast<double>(n_);
}

void ChainSampler::set_completed(const PotentialTable& table) {
    if (table.rows.size() != n_) throw DomainError("set_completed: row count mismatch");
    table_ = table;
}

void ChainSampler::set_sigma(const Vector& sigma_scales) {
    if (sigma_scales.size() != 4) throw DomainError("set_sigma: need 4 scales");
    for (int k = 0; k < 4; ++k) {
        if (!(sigma_scales[k] > 0.0)) throw DomainError("set_sigma: scales must be > 0");
        log_sigma_[k] = std::log(sigma_scales[k]);
    }
    rebuild_cov_cache();
}

void ChainSampler::set_correlation(const math::CorrelationMatrix& omega) {
    if (omega.dim() != 4) throw DomainError("set_correlation: dimension must be 4");
    // invert the CPC construction through the Cholesky factor
    const Matrix l = math::cholesky(omega.matrix());
    int m = 0;
    std::array<double, 6> raw{};
    std::vector<std::vector<double>> cpc(4, std::vector<double>(4, 0.0));
    for (int i = 1; i < 4; ++i) {
        double sumsq = 0.0;
        for (int j = 0; j < i; ++j) {
            const double rem = std::max(1.0 - sumsq, 1e-300);
            cpc[i][j] = l(i, j) / std::sqrt(rem);
            sumsq += l(i, j) * l(i, j);
        }
    }
    for (int j = 0; j + 1 < 4; ++j)
        for (int i = j + 1; i < 4; ++i, ++m)
            raw[m] = std::atanh(std::clamp(cpc[i][j], -1.0 + 1e-12, 1.0 - 1e-12));
    cpc_raw_ = raw;
    rebuild_cov_cache();
}

void ChainSampler::set_mean(const Vector& mean_flat) {
    if (mean_flat.size() != mean_flat_.size())
        throw DomainError("set_mean: dimension mismatch");
    mean_flat_ = mean_flat;
}

Vector ChainSampler::sigma_scales() const {
    return {sigma_[0], sigma_[1], sigma_[2], sigma_[3]};
}

Matrix ChainSampler::correlation() const {
    Matrix omega(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k <= std::min(i, j); ++k) s += corr_chol_[i][k] * corr_chol_[j][k];
            omega(i, j) = s;
        }
    for (int i = 0; i < 4; ++i) omega(i, i) = 1.0;
    return omega;
}

Vector ChainSampler::mean_flat() const { return mean_flat_; }

PosteriorDraws run_chain(const TrialData& data, const AnalysisConfig& config, BayesModel model,
                         bool intercept, std::uint64_t stream) {
    config.validate();
    ChainSampler sampler(data, config.priors, model, math::RngStream(config.seed, stream),
                         intercept);

    PosteriorDraws draws;
    draws.burnin = config.burnin;
    const int T = config.iters;
    draws.theta.reserve(T);
    draws.v_y.reserve(T);
    draws.v_s.reserve(T);
    draws.traces.reserve(T);
    draws.accept.reserve(T);

    double acc_sigma = 0.0, acc_corr = 0.0;
    std::size_t post = 0;
    for (int t = 1; t <= T; ++t) {
        sampler.set_adaptation(t <= config.burnin);
        try {
            sampler.step();
        } catch (const std::exception& e) {
            throw NumericError("chain failed at iteration " + std::to_string(t) + ": " +
                               e.what());
        }

        const double vy = sampler.v_y_hat();
        const double vs = sampler.v_s_hat();
        draws.v_y.push_back(vy);
        draws.v_s.push_back(vs);
        draws.theta.push_back(vy - vs);

        TraceRow row;
        const Vector sig = sampler.sigma_scales();
        std::copy(sig.begin(), sig.end(), row.sigma.begin());
        const Matrix omega = sampler.correlation();
        int m = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) row.corr[m++] = omega(i, j);
        row.mean = sampler.mean_flat();
        draws.traces.push_back(std::move(row));

        draws.accept.push_back(
            0.5 * (sampler.last_sigma_accept_fraction() + sampler.last_corr_accept_fraction()));
        if (t > config.burnin) {
            ++post;
            acc_sigma += sampler.last_sigma_accept_fraction();
            acc_corr += sampler.last_corr_accept_fraction();
        }
    }
    if (post > 0) {
        draws.accept_rate_sigma = acc_sigma / static_cast<double>(post);
        draws.accept_rate_corr = acc_corr / static_cast<double>(post);
    }
    return draws;
}

double upper_quantile(std::vector<double> draws, double level) {
    if (draws.empty()) throw DomainError("upper_quantile: no draws");
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("upper_quantile: level out of range");
    std::sort(draws.begin(), draws.end());
    const auto m = static_cast<double>(draws.size());
    auto idx = static_cast<std::size_t>(std::ceil(level * m));
    idx = std::clamp<std::size_t>(idx, 1, draws.size());
    return draws[idx - 1];
}

BayesTestResult credible_decision(const PosteriorDraws& draws, double eta, double alpha,
                                  int burnin) {
    const int T = static_cast<int>(draws.theta.size());
    if (burnin < 0 || burnin >= T)
        throw DomainError("credible_decision: burnin must satisfy 0 <= b < T");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("credible_decision: alpha must lie in (0,1)");
    std::vector<double> post(draws.theta.begin() + burnin, draws.theta.end());
    BayesTestResult res;
    res.theta_quantile = upper_quantile(post, 1.0 - alpha);
    res.eta = eta;
    res.decision = (res.theta_quantile < eta) ? Decision::Valid : Decision::NotValid;
    res.posterior_mean_v_y = mean_of(draws.v_y, burnin);
    return res;
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "iteration,v_y,v_s,theta,acceptance\n";
    for (std::size_t t = 0; t < draws.theta.size(); ++t)
        out << (t + 1) << ',' << format_double(draws.v_y[t]) << ',' << format_double(draws.v_s[t])
            << ',' << format_double(draws.theta[t]) << ',' << format_double(draws.accept[t])
            << "\n";
}

} // namespace surro
