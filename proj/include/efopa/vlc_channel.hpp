#pragma once

// Lambertian line-of-sight VLC channel model and the unique-channel enumeration
// used to train the empirical allocation curve.
//
// All angles are radians. Receivers face the zenith and the LED faces the floor.

#include <cstddef>
#include <numbers>
#include <vector>

namespace efopa {

inline constexpr double deg_to_rad(double deg) noexcept { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / std::numbers::pi; }

/// Optical front-end and emitter constants.
struct VlcParams {
    double pd_area = 1e-4;          ///< photo-detector area [m^2]
    double refractive_index = 1.5;  ///< concentrator refractive index
    double filter_gain = 1.0;       ///< optical filter gain T_s
    double fov = deg_to_rad(60.0);  ///< receiver field-of-view half-angle [rad]
    double semi_angle = deg_to_rad(60.0);  ///< LED half-power semi-angle [rad]

    /// Throws PreconditionError naming the first offending field.
    void validate() const;
};

struct LinkGeometry {
    double distance = 0.0;          ///< [m]
    double irradiance_angle = 0.0;  ///< from the transmitter normal [rad]
    double incidence_angle = 0.0;   ///< from the receiver normal [rad]
};

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

struct ChannelGrid {
    std::vector<double> distances;  ///< [m]
    std::vector<double> angles;     ///< [rad], applied to both irradiance and incidence
    double dedup_tolerance = 1e-9;  ///< relative

    void validate(const VlcParams& params) const;

    /// 0.25 m steps up to 5 m plus the 3*sqrt(3) m room diagonal; 5..60 deg in 5 deg steps.
    static ChannelGrid reference();
};

struct ChannelSet {
    std::vector<double> gains;  ///< strictly ascending, all > 0
    std::size_t combo_count = 0;
    double mean_gain = 0.0;     ///< h0, mean over the unique gains
    double dedup_tolerance = 0.0;

    std::size_t unique_count() const noexcept { return gains.size(); }
};

/// -ln 2 / ln(cos(semi_angle)). Throws DomainError outside (0, pi/2).
double lambertian_order(double semi_angle);

/// n^2 / sin^2(fov) inside the field of view, 0 outside it.
double concentrator_gain(double incidence_angle, const VlcParams& params);

/// ((k + 1) / 2 pi) cos^k(irradiance_angle)
double radiant_intensity(double irradiance_angle, double lambertian_order);

/// LoS DC gain. Zero when the incidence angle exceeds the FoV.
double channel_gain(const LinkGeometry& geom, const VlcParams& params);

/// Downward-facing LED at `tx`, upward-facing receiver at `rx`; both angles equal
/// the zenith angle of the link.
LinkGeometry geometry_from_positions(const Position& tx, const Position& rx);

/// Evaluates every (distance, irradiance, incidence) triple of the grid, sorts the
/// gains and collapses neighbours closer than the relative tolerance.
ChannelSet enumerate_channels(const ChannelGrid& grid, const VlcParams& params);

}  // namespace efopa
