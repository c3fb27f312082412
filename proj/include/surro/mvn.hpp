#pragma once

#include <cstddef>
#include <vector>

#include "surro/linalg.hpp"
#include "surro/rng.hpp"

namespace surro::math {

// Correlation matrix: symmetric, unit diagonal, positive definite
// (Cholesky pivots > 1e-10). Construction validates.
class CorrelationMatrix {
  public:
    explicit CorrelationMatrix(Matrix m);

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

  private:
    Matrix m_;
};

struct ConditionalMoments {
    Vector mean;          // conditional mean of the unobserved block
    Matrix cov;           // conditional covariance
    std::vector<std::size_t> free_idx; // coordinates the moments refer to
};

// Exact Gaussian conditional of the unobserved coordinates given observed
// ones. observed_idx must be a nonempty proper subset of {0..k-1}.
ConditionalMoments mvn_conditional(const Vector& mu, const Matrix& sigma,
                                   const std::vector<std::size_t>& observed_idx,
                                   const Vector& observed_vals);

Vector sample_mvn(const Vector& mu, const Matrix& sigma, RngStream& rng);

// Lower Cholesky factor of the correlation matrix determined by canonical
// partial correlations z (|z| < 1), listed column-major: (i,j) for
// j = 0..k-2, i = j+1..k-1. Inverse of lkj shape used by the MH kernel.
Matrix corr_cholesky_from_cpc(const std::vector<double>& z, std::size_t k);

// Beta parameter of the CPC at column j for an LKJ(tau) prior in dim k:
// (z+1)/2 ~ Beta(alpha, alpha) with alpha = tau + (k - 2 - j) / 2.
double lkj_cpc_beta_param(double tau, std::size_t k, std::size_t column);

// Draw from LKJ(tau): density proportional to det(Omega)^(tau-1).
CorrelationMatrix sample_lkj(double tau, std::size_t k, RngStream& rng);

} // namespace surro::math
