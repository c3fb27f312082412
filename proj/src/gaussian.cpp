#include "surro/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "surro/errors.hpp"
#include "surro/special.hpp"

namespace surro {

using math::normal_cdf;

void GaussianGroupParams::validate() const {
    if (mu.size() != 4) throw ValidationError("group params: mu must have length 4");
    if (sigma.rows() != 4 || sigma.cols() != 4)
        throw ValidationError("group params: sigma must be 4x4");
    if (!sigma.is_symmetric(1e-10)) throw ValidationError("group params: sigma must be symmetric");
    try {
        (void)math::cholesky(sigma);
    } catch (const NumericError& e) {
        throw ValidationError(std::string("group params: sigma not positive definite: ") +
                              e.what());
    }
}

void CovariateMixture::validate() const {
    if (groups.empty()) throw ValidationError("mixture: at least one group required");
    if (probs.size() != groups.size())
        throw ValidationError("mixture: probs length must match group count");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw ValidationError("mixture: probabilities must be nonnegative");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw ValidationError("mixture: probabilities must sum to 1");
    for (const auto& g : groups) g.validate();
}

namespace {

// coordinate pair of a target: (treated index, control index)
constexpr std::size_t kIdx1[2] = {0, 1}; // y1, s1
constexpr std::size_t kIdx0[2] = {2, 3}; // y0, s0

std::size_t treated_index(Target t) { return kIdx1[t == Target::Y ? 0 : 1]; }
std::size_t control_index(Target t) { return kIdx0[t == Target::Y ? 0 : 1]; }

const char* target_name(Target t) { return t == Target::Y ? "Y" : "S"; }

} // namespace

double within_unit_prob(const GaussianGroupParams& params, Target target) {
    const std::size_t i1 = treated_index(target);
    const std::size_t i0 = control_index(target);
    const double var = params.sigma(i1, i1) + params.sigma(i0, i0) - 2.0 * params.sigma(i1, i0);
    if (!(var > 0.0))
        throw NumericError(std::string("within_unit_prob(") + target_name(target) +
                           "): within-pair variance is not positive (" + std::to_string(var) +
                           ")");
    return normal_cdf((params.mu[i1] - params.mu[i0]) / std::sqrt(var));
}

double between_unit_prob(const GaussianGroupParams& params_i,
                         const GaussianGroupParams& params_j, Target target) {
    const std::size_t i1 = treated_index(target);
    const std::size_t i0 = control_index(target);
    const double var = params_i.sigma(i1, i1) + params_j.sigma(i0, i0);
    if (!(var > 0.0))
        throw NumericError(std::string("between_unit_prob(") + target_name(target) +
                           "): variance sum is not positive");
    return normal_cdf((params_i.mu[i1] - params_j.mu[i0]) / std::sqrt(var));
}

DiscrepancyReport discrepancy_report(const CovariateMixture& mixture) {
    mixture.validate();
    const std::size_t g = mixture.groups.size();
    DiscrepancyReport rep;
    rep.per_group_theta.resize(g);
    rep.cross_group_delta = math::Matrix(g, g);

    for (std::size_t i = 0; i < g; ++i) {
        try {
            rep.per_group_theta[i] = within_unit_prob(mixture.groups[i], Target::Y) -
                                     within_unit_prob(mixture.groups[i], Target::S);
        } catch (const NumericError& e) {
            throw NumericError("group " + std::to_string(i) + ": " + e.what());
        }
    }
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) {
            try {
                rep.cross_group_delta(i, j) =
                    between_unit_prob(mixture.groups[i], mixture.groups[j], Target::Y) -
                    between_unit_prob(mixture.groups[i], mixture.groups[j], Target::S);
            } catch (const NumericError& e) {
                throw NumericError("group pair (" + std::to_string(i) + "," +
                                   std::to_string(j) + "): " + e.what());
            }
        }

    rep.theta = 0.0;
    rep.delta = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        rep.theta += mixture.probs[i] * rep.per_group_theta[i];
        for (std::size_t j = 0; j < g; ++j)
            rep.delta += mixture.probs[i] * mixture.probs[j] * rep.cross_group_delta(i, j);
    }
    return rep;
}

double perfect_surrogate_gap(double delta_effect, double d_y, double d_s) {
    const double v = normal_cdf(delta_effect + d_y) - normal_cdf(delta_effect + d_s) +
                     normal_cdf(delta_effect - d_y) - normal_cdf(delta_effect - d_s);
    return 0.25 * std::fabs(v);
}

HeatmapGrid heatmap_grid(double delta_effect, double lo, double hi, double step) {
    if (!(lo < hi)) throw DomainError("heatmap_grid: lo must be < hi");
    if (!(step > 0.0)) throw DomainError("heatmap_grid: step must be > 0");
    HeatmapGrid grid;
    const int cells = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    grid.d_y_axis.resize(cells);
    grid.d_s_axis.resize(cells);
    for (int i = 0; i < cells; ++i) grid.d_y_axis[i] = grid.d_s_axis[i] = lo + i * step;
    grid.values = math::Matrix(cells, cells);
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j)
            grid.values(i, j) =
                perfect_surrogate_gap(delta_effect, grid.d_y_axis[i], grid.d_s_axis[j]);
    return grid;
}

void write_heatmap_csv(const std::string& path, const HeatmapGrid& grid) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return std::string(buf);
    };
    out << "";
    for (double ds : grid.d_s_axis) out << ',' << fmt(ds);
    out << "\n";
    for (std::size_t i = 0; i < grid.d_y_axis.size(); ++i) {
        out << fmt(grid.d_y_axis[i]);
        for (std::size_t j = 0; j < grid.d_s_axis.size(); ++j)
            out << ',' << fmt(grid.values(i, j));
        out << "\n";
    }
}

} // namespace surro
