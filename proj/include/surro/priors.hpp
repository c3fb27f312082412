#pragma once

#include <optional>

#include "surro/linalg.hpp"

namespace surro {

// Priors of the imputation models. The no-covariate model uses (mu0, sigma0)
// for the mean vector; the covariate model places independent N(mu_beta,
// sigma_beta) priors on each coefficient row. Scales sigma_k are
// Half-Normal(0, s) and the correlation matrix is LKJ(tau).
//
// mu_beta/sigma_beta left empty are materialized at run time as 0 and
// 10 * I sized to the design (covariates plus intercept).
struct ModelPriors {
    math::Vector mu0 = {0.0, 0.0, 0.0, 0.0};
    math::Matrix sigma0 = scaled_identity(4, 10.0);
    math::Vector mu_beta;  // empty -> zeros of design dimension
    math::Matrix sigma_beta; // empty -> 10 * identity of design dimension
    double s = 2.0;
    double tau = 1.0;

    static math::Matrix scaled_identity(std::size_t k, double c) {
        math::Matrix m = math::Matrix::identity(k);
        for (std::size_t i = 0; i < k; ++i) m(i, i) = c;
        return m;
    }

    void validate() const;
};

} // namespace surro
