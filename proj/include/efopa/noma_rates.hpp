#pragma once

// Power-domain NOMA superposition and achievable-rate models for intensity-modulated
// VLC downlinks.
//
// Users are indexed 0..K-1 in order of non-increasing channel gain: index 0 is the
// strongest user, which cancels everybody else through SIC. User k still sees the
// signals of all stronger-channel users l < k as interference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace efopa {

struct UserLink {
    double gain = 0.0;       ///< h_k
    double bandwidth = 0.0;  ///< B_k [Hz]
};

struct AllocationVector {
    std::vector<double> powers;  ///< [W], same order as the links
    double total = 0.0;          ///< P_max [W]

    /// Non-negative powers summing to `total` within 1e-9 relative.
    void validate() const;
};

struct NoiseModel {
    double variance = 3e-12;  ///< sigma^2, total in-band noise power [W]
};

enum class RateModel {
    LowerBound,                   ///< (B/2) log2(1 + 2 h^2 p / (pi e (I + sigma^2)))
    Shannon,                      ///< B log2(1 + h^2 p / (I + sigma^2))
    ShannonInterferenceDominant,  ///< Shannon with sigma^2 dropped for users k > 0
};

std::string_view to_string(RateModel model) noexcept;
/// Accepts "lower-bound", "shannon", "shannon-interference-dominant" and the
/// short alias "interference-dominant". Throws PreconditionError otherwise.
RateModel parse_rate_model(std::string_view name);

struct RateReport {
    std::vector<double> per_user_rates;  ///< [bit/s]
    double sum_rate = 0.0;
    double fairness = 0.0;
};

/// Smallest DC bias keeping sum_k sqrt(p_k) s_k + A non-negative for s_k in [-1, 1].
double min_dc_offset(std::span<const double> powers);

/// One transmitted intensity sample.
double superimpose(std::span<const double> symbols, std::span<const double> powers, double dc_offset);

/// Rate of user `k` (0-based). Throws OrderingError if gains increase along the list.
double rate_noma(std::size_t k, std::span<const UserLink> links, const AllocationVector& alloc,
                 const NoiseModel& noise, RateModel model);

/// Orthogonal access: full power `power` during a 1/K time share.
double rate_oma(const UserLink& link, double power, std::size_t user_count, const NoiseModel& noise);

/// (sum R)^2 / (K sum R^2). Throws DegenerateError when every rate is zero.
double jain_index(std::span<const double> rates);

RateReport evaluate(std::span<const UserLink> links, const AllocationVector& alloc,
                    const NoiseModel& noise, RateModel model);

}  // namespace efopa
