#include "efopa/noma_rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "efopa/error.hpp"

namespace efopa {

namespace {

double log2_ratio(double x) { return std::log(x) / std::numbers::ln2; }

void check_ordering(std::span<const UserLink> links) {
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (!(links[i].gain > 0.0) || !(links[i].bandwidth > 0.0)) {
            throw PreconditionError("user " + std::to_string(i) + ": gain and bandwidth must be > 0");
        }
        if (i > 0 && links[i].gain > links[i - 1].gain) {
            throw OrderingError("users must be sorted by non-increasing channel gain (user " +
                                std::to_string(i) + " is stronger than user " + std::to_string(i - 1) + ")");
        }
    }
}

}  // namespace

void AllocationVector::validate() const {
    double sum = 0.0;
    for (double p : powers) {
        if (!(p >= 0.0)) throw PreconditionError("allocation: powers must be >= 0");
        sum += p;
    }
    if (!(total > 0.0)) throw PreconditionError("allocation: total power must be > 0");
    if (std::abs(sum - total) > 1e-9 * total) {
        throw PreconditionError("allocation: powers do not sum to the total power");
    }
}

std::string_view to_string(RateModel model) noexcept {
    switch (model) {
        case RateModel::LowerBound: return "lower-bound";
        case RateModel::Shannon: return "shannon";
        case RateModel::ShannonInterferenceDominant: return "shannon-interference-dominant";
    }
    return "?";
}

RateModel parse_rate_model(std::string_view name) {
    if (name == "lower-bound") return RateModel::LowerBound;
    if (name == "shannon") return RateModel::Shannon;
    // Strongest user noise-limited, every weaker user
    // interference-limited. Shannon and the interference-dominant model coincide for k = 0.
    if (name == "interference-dominant" || name == "shannon-interference-dominant") {
        return RateModel::ShannonInterferenceDominant;
    }
    throw PreconditionError("unknown rate model '" + std::string(name) + "'");
}

double min_dc_offset(std::span<const double> powers) {
    double a = 0.0;
    for (double p : powers) {
        if (!(p >= 0.0)) throw PreconditionError("min_dc_offset: powers must be >= 0");
        a += std::sqrt(p);
    }
    return a;
}

double superimpose(std::span<const double> symbols, std::span<const double> powers, double dc_offset) {
    if (symbols.size() != powers.size()) {
        throw PreconditionError("superimpose: one symbol per user required");
    }
    const double min_a = min_dc_offset(powers);
    if (dc_offset < min_a * (1.0 - 1e-12)) {
        throw PreconditionError("superimpose: DC offset below the non-negativity minimum");
    }
    double x = dc_offset;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        if (!(symbols[k] >= -1.0 && symbols[k] <= 1.0)) {
            throw PreconditionError("superimpose: symbols must lie in [-1, 1]");
        }
        x += std::sqrt(powers[k]) * symbols[k];
    }
    return std::max(x, 0.0);
}

double rate_noma(std::size_t k, std::span<const UserLink> links, const AllocationVector& alloc,
                 const NoiseModel& noise, RateModel model) {
    check_ordering(links);
    if (alloc.powers.size() != links.size()) {
        throw PreconditionError("rate_noma: one power per user required");
    }
    if (k >= links.size()) throw PreconditionError("rate_noma: user index out of range");
    if (!(noise.variance >= 0.0)) throw PreconditionError("rate_noma: noise variance must be >= 0");

    const double h2 = links[k].gain * links[k].gain;
    const double stronger_power = std::accumulate(alloc.powers.begin(), alloc.powers.begin() + k, 0.0);
    const double interference = h2 * stronger_power;
    const double signal = h2 * alloc.powers[k];
    const double bw = links[k].bandwidth;

    switch (model) {
        case RateModel::LowerBound: {
            const double denom = std::numbers::pi * std::numbers::e * (interference + noise.variance);
            return bw / 2.0 * log2_ratio(1.0 + 2.0 * signal / denom);
        }
        case RateModel::Shannon:
            return bw * log2_ratio(1.0 + signal / (interference + noise.variance));
        case RateModel::ShannonInterferenceDominant: {
            // Without residual interference the approximation has no denominator; fall back
            // to the noise-limited expression.
            const double denom = (k > 0 && interference > 0.0) ? interference : interference + noise.variance;
            return bw * log2_ratio(1.0 + signal / denom);
        }
    }
    return 0.0;
}

double rate_oma(const UserLink& link, double power, std::size_t user_count, const NoiseModel& noise) {
    if (!(power >= 0.0)) throw PreconditionError("rate_oma: power must be >= 0");
    if (user_count < 1) throw PreconditionError("rate_oma: user count must be >= 1");
    const double snr = link.gain * link.gain * power / noise.variance;
    return link.bandwidth / static_cast<double>(user_count) * log2_ratio(1.0 + snr);
}

double jain_index(std::span<const double> rates) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double r : rates) {
        sum += r;
        sum_sq += r * r;
    }
    if (rates.empty() || !(sum_sq > 0.0)) {
        throw DegenerateError("jain_index: at least one rate must be positive");
    }
    return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

RateReport evaluate(std::span<const UserLink> links, const AllocationVector& alloc,
                    const NoiseModel& noise, RateModel model) {
    RateReport report;
    report.per_user_rates.reserve(links.size());
    for (std::size_t k = 0; k < links.size(); ++k) {
        report.per_user_rates.push_back(rate_noma(k, links, alloc, noise, model));
    }
    report.sum_rate = std::accumulate(report.per_user_rates.begin(), report.per_user_rates.end(), 0.0);
    report.fairness = jain_index(report.per_user_rates);
    return report;
}

}  // namespace efopa
