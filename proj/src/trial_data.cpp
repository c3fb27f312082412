#include "surro/trial_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "surro/errors.hpp"

namespace surro {

namespace {

bool has_ties(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
    const std::string t = trim(cell);
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column '" + col +
                         "': cannot parse '" + t + "' as a number");
    }
}

} // namespace

TrialData::TrialData(std::vector<long> ids, std::vector<TrialRecord> records)
    : ids_(std::move(ids)), records_(std::move(records)) {
    if (ids_.size() != records_.size())
        throw ValidationError("id/record count mismatch");
    if (records_.empty()) throw ValidationError("dataset is empty");

    d_ = records_.front().x.size();
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const TrialRecord& r = records_[i];
        if (!std::isfinite(r.y) || !std::isfinite(r.s))
            throw ValidationError("row " + std::to_string(i + 1) + ": y and s must be finite");
        for (double xv : r.x)
            if (!std::isfinite(xv))
                throw ValidationError("row " + std::to_string(i + 1) + ": covariates must be finite");
        if (r.z != 0 && r.z != 1)
            throw ValidationError("row " + std::to_string(i + 1) + ": z \xE2\x88\x88 {0,1} violated (z=" +
                                  std::to_string(r.z) + ")");
        if (r.x.size() != d_)
            throw ValidationError("row " + std::to_string(i + 1) +
                                  ": covariate dimension differs from first row");
        (r.z == 1 ? n1_ : n0_) += 1;
    }
    if (n1_ == 0) throw ValidationError("treated arm is empty");
    if (n0_ == 0) throw ValidationError("control arm is empty");

    std::set<long> seen(ids_.begin(), ids_.end());
    if (seen.size() != ids_.size())
        throw ValidationError("duplicate unit identifiers");

    std::vector<double> ys, ss;
    ys.reserve(n());
    ss.reserve(n());
    for (const auto& r : records_) {
        ys.push_back(r.y);
        ss.push_back(r.s);
    }
    if (has_ties(std::move(ys))) warnings_.push_back("tied values present in y");
    if (has_ties(std::move(ss))) warnings_.push_back("tied values present in s");
}

std::vector<double> TrialData::arm_values(int z, bool surrogate) const {
    std::vector<double> out;
    for (const auto& r : records_)
        if (r.z == z) out.push_back(surrogate ? r.s : r.y);
    return out;
}

PotentialTable PotentialTable::from_trial(const TrialData& data) {
    PotentialTable t;
    t.rows.resize(data.n());
    t.observed_arm.resize(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) {
        const TrialRecord& r = data.record(i);
        if (r.z == 1) {
            t.rows[i] = {r.y, r.s, 0.0, 0.0};
            t.observed_arm[i] = ObservedArm::Treated;
        } else {
            t.rows[i] = {0.0, 0.0, r.y, r.s};
            t.observed_arm[i] = ObservedArm::Control;
        }
    }
    return t;
}

void AnalysisConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (iters < 1) throw DomainError("iters must be >= 1");
    if (burnin < 0 || burnin >= iters) throw DomainError("burnin must satisfy 0 <= b < T");
    threshold_config.validate();
}

void ModelPriors::validate() const {
    if (mu0.size() != 4) throw DomainError("priors: mu0 must have length 4");
    if (sigma0.rows() != 4 || sigma0.cols() != 4)
        throw DomainError("priors: sigma0 must be 4x4");
    (void)math::cholesky(sigma0);
    if (!mu_beta.empty() || sigma_beta.rows() != 0) {
        if (sigma_beta.rows() != mu_beta.size() || sigma_beta.cols() != mu_beta.size())
            throw DomainError("priors: sigma_beta shape must match mu_beta");
        (void)math::cholesky(sigma_beta);
    }
    if (!(s > 0.0)) throw DomainError("priors: half-normal scale s must be > 0");
    if (!(tau > 0.0)) throw DomainError("priors: LKJ shape tau must be > 0");
}

TrialData load_trial_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const std::vector<std::string> header = split_csv_line(line);
    std::vector<std::string> names;
    for (const auto& h : header) names.push_back(trim(h));

    auto expect = [&](std::size_t idx, const std::string& want) {
        if (idx >= names.size() || names[idx] != want)
            throw ValidationError("'" + path + "': expected column '" + want + "' at position " +
                                  std::to_string(idx + 1));
    };
    expect(0, "id");
    expect(1, "y");
    expect(2, "s");
    expect(3, "z");
    const std::size_t d = names.size() - 4;
    for (std::size_t j = 0; j < d; ++j) expect(4 + j, "x" + std::to_string(j + 1));

    std::vector<long> ids;
    std::vector<TrialRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != names.size())
            throw ParseError("row " + std::to_string(row) + ": expected " +
                             std::to_string(names.size()) + " cells, found " +
                             std::to_string(cells.size()));
        TrialRecord r;
        const double idv = parse_cell(cells[0], row, "id");
        r.y = parse_cell(cells[1], row, "y");
        r.s = parse_cell(cells[2], row, "s");
        const double zv = parse_cell(cells[3], row, "z");
        if (zv != 0.0 && zv != 1.0)
            throw ValidationError("row " + std::to_string(row) + ": z \xE2\x88\x88 {0,1} violated (z=" +
                                  trim(cells[3]) + ")");
        r.z = static_cast<int>(zv);
        r.x.resize(d);
        for (std::size_t j = 0; j < d; ++j) r.x[j] = parse_cell(cells[4 + j], row, names[4 + j]);
        ids.push_back(static_cast<long>(idv));
        records.push_back(std::move(r));
    }
    return TrialData(std::move(ids), std::move(records));
}

TrialData load_trial_csv(const std::string& path, bool has_covariates) {
    TrialData data = load_trial_csv(path);
    if (has_covariates && data.covariate_dim() == 0)
        throw ValidationError("'" + path + "': covariate columns expected but none found");
    if (!has_covariates && data.covariate_dim() > 0)
        throw ValidationError("'" + path + "': unexpected covariate columns present");
    return data;
}

void write_trial_csv(const std::string& path, const TrialData& data) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << "id,y,s,z";
    for (std::size_t j = 0; j < data.covariate_dim(); ++j) out << ",x" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < data.n(); ++i) {
        const TrialRecord& r = data.record(i);
        out << data.ids()[i] << ',' << format_double(r.y) << ',' << format_double(r.s) << ','
            << r.z;
        for (double xv : r.x) out << ',' << format_double(xv);
        out << "\n";
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace surro
