#include "efopa/vlc_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "efopa/error.hpp"

namespace efopa {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

[[noreturn]] void bad_param(const std::string& field, const std::string& why) {
    throw PreconditionError("invalid " + field + ": " + why);
}

}  // namespace

void VlcParams::validate() const {
    if (!(pd_area > 0.0)) bad_param("pd_area", "must be > 0");
    if (!(refractive_index >= 1.0)) bad_param("refractive_index", "must be >= 1");
    if (!(filter_gain > 0.0)) bad_param("filter_gain", "must be > 0");
    if (!(fov > 0.0 && fov <= kHalfPi)) bad_param("fov", "must lie in (0, 90] deg");
    if (!(semi_angle > 0.0 && semi_angle < kHalfPi)) bad_param("semi_angle", "must lie in (0, 90) deg");
}

void ChannelGrid::validate(const VlcParams& params) const {
    if (distances.empty()) bad_param("grid.distances", "empty");
    if (angles.empty()) bad_param("grid.angles", "empty");
    for (double d : distances) {
        if (!(d > 0.0) || !std::isfinite(d)) bad_param("grid.distances", "values must be > 0");
    }
    for (double a : angles) {
        if (!(a > 0.0 && a <= params.fov)) bad_param("grid.angles", "values must lie in (0, fov]");
    }
    if (!(dedup_tolerance >= 0.0)) bad_param("grid.dedup_tolerance", "must be >= 0");
}

ChannelGrid ChannelGrid::reference() {
    ChannelGrid grid;
    for (int i = 1; i <= 20; ++i) grid.distances.push_back(0.25 * i);
    grid.distances.push_back(3.0 * std::sqrt(3.0));
    for (int deg = 5; deg <= 60; deg += 5) grid.angles.push_back(deg_to_rad(deg));
    grid.dedup_tolerance = 1e-9;
    return grid;
}

double lambertian_order(double semi_angle) {
    if (!(semi_angle > 0.0 && semi_angle < kHalfPi)) {
        throw DomainError("lambertian_order: semi-angle must lie in (0, pi/2)");
    }
    const double c = std::cos(semi_angle);
    if (!(c > 0.0 && c < 1.0)) {
        throw DomainError("lambertian_order: cos(semi-angle) outside (0, 1)");
    }
    return -std::log(2.0) / std::log(c);
}

double concentrator_gain(double incidence_angle, const VlcParams& params) {
    if (!(incidence_angle >= 0.0)) {
        throw PreconditionError("concentrator_gain: incidence angle must be >= 0");
    }
    if (incidence_angle > params.fov) return 0.0;
    const double s = std::sin(params.fov);
    return params.refractive_index * params.refractive_index / (s * s);
}

double radiant_intensity(double irradiance_angle, double lambertian_order) {
    // cos(pi/2) is ~6e-17 in double; clamp so the emitter edge is exactly dark.
    const double c = std::max(0.0, std::cos(irradiance_angle));
    if (irradiance_angle >= kHalfPi) return 0.0;
    return (lambertian_order + 1.0) / (2.0 * std::numbers::pi) * std::pow(c, lambertian_order);
}

double channel_gain(const LinkGeometry& geom, const VlcParams& params) {
    if (!(geom.distance > 0.0)) throw DomainError("channel_gain: distance must be > 0");
    if (geom.incidence_angle > params.fov) return 0.0;
    const double k = lambertian_order(params.semi_angle);
    const double d2 = geom.distance * geom.distance;
    return params.pd_area * radiant_intensity(geom.irradiance_angle, k) / d2 * params.filter_gain *
           concentrator_gain(geom.incidence_angle, params) * std::cos(geom.incidence_angle);
}

LinkGeometry geometry_from_positions(const Position& tx, const Position& rx) {
    if (tx == rx) throw DegenerateError("geometry_from_positions: transmitter and receiver coincide");
    if (!(tx.z > rx.z)) {
        throw PreconditionError("geometry_from_positions: transmitter must be above the receiver");
    }
    const double dx = tx.x - rx.x;
    const double dy = tx.y - rx.y;
    const double dz = tx.z - rx.z;
    LinkGeometry g;
    g.distance = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double angle = std::acos(std::clamp(dz / g.distance, -1.0, 1.0));
    g.irradiance_angle = angle;
    g.incidence_angle = angle;
    return g;
}

ChannelSet enumerate_channels(const ChannelGrid& grid, const VlcParams& params) {
    params.validate();
    grid.validate(params);

    std::vector<double> all;
    all.reserve(grid.distances.size() * grid.angles.size() * grid.angles.size());
    for (double d : grid.distances) {
        for (double phi : grid.angles) {
            for (double psi : grid.angles) {
                all.push_back(channel_gain({d, phi, psi}, params));
            }
        }
    }

    ChannelSet set;
    set.combo_count = all.size();
    set.dedup_tolerance = grid.dedup_tolerance;

    std::sort(all.begin(), all.end());
    for (double g : all) {
        if (!set.gains.empty()) {
            const double last = set.gains.back();
            if (g - last <= grid.dedup_tolerance * std::max(std::abs(g), std::abs(last))) continue;
        }
        set.gains.push_back(g);
    }
    set.mean_gain = std::accumulate(set.gains.begin(), set.gains.end(), 0.0) /
                    static_cast<double>(set.gains.size());
    return set;
}

}  // namespace efopa
