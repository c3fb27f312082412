#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surro/priors.hpp"
#include "surro/threshold.hpp"

namespace surro {

enum class Decision { Valid, NotValid };

// One trial unit: primary outcome y, surrogate s, randomized arm z,
// optional baseline covariates. All numeric fields must be finite and every
// record of a dataset must carry the same covariate dimension.
struct TrialRecord {
    double y = 0.0;
    double s = 0.0;
    int z = 0;
    std::vector<double> x;
};

class TrialData {
  public:
    TrialData(std::vector<long> ids, std::vector<TrialRecord> records);

    std::size_t n() const { return records_.size(); }
    std::size_t n1() const { return n1_; }
    std::size_t n0() const { return n0_; }
    std::size_t covariate_dim() const { return d_; }

    const TrialRecord& record(std::size_t i) const { return records_[i]; }
    const std::vector<TrialRecord>& records() const { return records_; }
    const std::vector<long>& ids() const { return ids_; }

    std::vector<double> arm_values(int z, bool surrogate) const;

    // Tie warnings raised at load time (the methods assume continuous
    // outcomes; tied y or s values are legal but worth flagging).
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    std::vector<long> ids_;
    std::vector<TrialRecord> records_;
    std::size_t n1_ = 0, n0_ = 0, d_ = 0;
    std::vector<std::string> warnings_;
};

// Potential-outcome rows stored in the order (y1, s1, y0, s0). observed_arm
// marks which pair came from the data; those entries are never rewritten by
// the sampler.
enum class ObservedArm : std::uint8_t { Control = 0, Treated = 1 };

struct PotentialTable {
    std::vector<std::array<double, 4>> rows;
    std::vector<ObservedArm> observed_arm;

    std::size_t n() const { return rows.size(); }
    static PotentialTable from_trial(const TrialData& data);
};

// Shared run configuration. threshold empty means "auto": calibrate the
// validation margin from threshold_config (and the method's estimate of the
// treatment effect on the primary outcome).
struct AnalysisConfig {
    double alpha = 0.05;
    std::optional<double> threshold;
    int iters = 500;
    int burnin = 125;
    std::uint64_t seed = 0;
    ModelPriors priors;
    ThresholdConfig threshold_config;

    void validate() const;
};

// CSV with header id,y,s,z[,x1..xd]; UTF-8, '.' decimal separator.
TrialData load_trial_csv(const std::string& path);
TrialData load_trial_csv(const std::string& path, bool has_covariates);
void write_trial_csv(const std::string& path, const TrialData& data);

// 17-significant-digit formatting: reading the text back reproduces the
// exact double, which makes file round-trips bit-stable.
std::string format_double(double v);

} // namespace surro
