#pragma once

// Two-user power allocators: the fairness-optimal search, the empirical fitted-curve
// allocator (EFOPA) with its offline dataset builder, and the GRPA, NGDPA and OMA
// baselines.
//
// Convention: user 1 is the strong-channel user (h1 >= h2), r = h2 / h1 and p1 is the
// strong user's power. Allocation vectors list the strong user first.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "efopa/abc.hpp"
#include "efopa/curve_fit.hpp"
#include "efopa/noma_rates.hpp"
#include "efopa/vlc_channel.hpp"

namespace efopa {

/// Mean unique channel gain printed with the published coefficients.
inline constexpr double kPublishedH0 = 7.9144e-5;

enum class MuMode {
    Transfer,  ///< p1 = (h_ref / h1) sqrt(p_new / p_ref) Fit(r)
    Direct,  ///< p1 = Fit(r) with no transfer factor
};

std::string_view to_string(MuMode mode) noexcept;
MuMode parse_mu_mode(std::string_view name);  ///< "transfer" | "direct"

struct EfopaModel {
    ExpFitCoefficients coefficients;
    double h_ref = 2.0 * kPublishedH0;  ///< strong-user gain the curve was fitted at
    double p_ref = 22.5;                ///< total power the curve was fitted at [W]
    double h0 = kPublishedH0;
    MuMode mu_mode = MuMode::Transfer;
    double clamp_floor = 0.0;  ///< minimum p1 [W]

    void validate() const;

    /// The published curve referenced to h1 = 2 h0 and P = 22.5 W.
    static EfopaModel published();
};

struct TwoUserInstance {
    double h_strong = 0.0;
    double h_weak = 0.0;
    double p_max = 22.5;
    double bandwidth = 30e6;
    double noise_variance = 3e-12;

    void validate() const;
    double ratio() const noexcept { return h_weak / h_strong; }
};

/// Jain index of the two users' rates with p2 = p_max - p1.
double fairness_objective(double p1, const TwoUserInstance& inst, RateModel model = RateModel::LowerBound);

/// ABC over p1 in [0, p_max / 2].
double optimize_fair_two_user(const TwoUserInstance& inst, const AbcConfig& abc,
                              RateModel model = RateModel::LowerBound);

struct DatasetPoint {
    double r = 0.0;
    double p1 = 0.0;
    double h_strong = 0.0;
    double h_weak = 0.0;
};

struct DatasetOptions {
    double p_max = 22.5;
    double bandwidth = 30e6;
    double noise_variance = 3e-12;
    RateModel model = RateModel::LowerBound;
    AbcConfig abc;  ///< `stream` is overwritten with the channel index
    /// When false only channels no stronger than h1 are used. When true, stronger
    /// channels are kept and take the strong-user role for that run.
    bool swap_stronger = false;
};

/// One fairness optimization per unique channel. Channel m uses PRNG stream m of the
/// master seed, so the result does not depend on evaluation order. Sorted by r.
std::vector<DatasetPoint> build_efopa_dataset(double h1, const ChannelSet& channels, const DatasetOptions& options);

/// Transfer factor (h_ref / h1) sqrt(p_new / p_ref). Computed for either mode; only
/// MuMode::Transfer applies it.
double efopa_mu(const EfopaModel& model, double h1, double p_new);

AllocationVector efopa_allocate(const EfopaModel& model, double h1, double h2, double p_new);

/// Gain-ratio rule for two users: p_weak = p_strong / r^2.
AllocationVector grpa_allocate(double h1, double h2, double p_max);

/// Normalized-gain-difference rule for two users: p_strong / p_weak = 1 - r.
AllocationVector ngdpa_allocate(double h1, double h2, double p_max);

struct OmaAllocation {
    double slot_power = 0.0;  ///< power while a user owns the channel [W]
    std::size_t user_count = 1;
    double time_share() const noexcept { return 1.0 / static_cast<double>(user_count); }
};

OmaAllocation oma_allocate(double p_max, std::size_t user_count);

}  // namespace efopa
