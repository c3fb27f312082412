#pragma once

#include <string>
#include <vector>

#include "surro/linalg.hpp"

namespace surro {

enum class Target { Y, S };

// Gaussian potential-outcome model of one covariate stratum; mean and
// covariance are in the canonical order (y1, s1, y0, s0).
struct GaussianGroupParams {
    math::Vector mu;   // length 4
    math::Matrix sigma; // 4x4 SPD

    void validate() const;
};

// Finite covariate mixture: stratum parameters plus stratum probabilities.
struct CovariateMixture {
    std::vector<GaussianGroupParams> groups;
    std::vector<double> probs;

    void validate() const;
};

struct DiscrepancyReport {
    double theta;
    double delta;
    std::vector<double> per_group_theta;
    math::Matrix cross_group_delta; // delta^{ij} = u_between(i,j,Y) - u_between(i,j,S)
};

// P(outcome higher under treatment than control for the same unit | stratum):
// Phi((mu_1 - mu_3) / sqrt(S11 + S33 - 2 S13)) for Y; indices (2,4) for S.
double within_unit_prob(const GaussianGroupParams& params, Target target);

// P(treated unit from stratum i beats an independent control unit from
// stratum j): Phi((mu^i_1 - mu^j_3) / sqrt(S^i_11 + S^j_33)); no cross term.
double between_unit_prob(const GaussianGroupParams& params_i,
                         const GaussianGroupParams& params_j, Target target);

// theta = sum_x f(x) theta^x and delta = sum_{x_i,x_j} f(x_i) f(x_j) delta^{ij}.
DiscrepancyReport discrepancy_report(const CovariateMixture& mixture);

// |theta - delta| for a perfect surrogate with homogeneous effect Delta and
// control-mean gaps d_y, d_s between two equally likely strata:
// (1/4)|Phi(D+d_y) - Phi(D+d_s) + Phi(D-d_y) - Phi(D-d_s)|; at most 1/4.
double perfect_surrogate_gap(double delta_effect, double d_y, double d_s);

struct HeatmapGrid {
    std::vector<double> d_y_axis;
    std::vector<double> d_s_axis;
    math::Matrix values; // values(i,j) = gap at (d_y_axis[i], d_s_axis[j])
};

HeatmapGrid heatmap_grid(double delta_effect, double lo, double hi, double step);

// First row: d_s axis; first column: d_y axis; 9 significant digits.
void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid);

} // namespace surro
