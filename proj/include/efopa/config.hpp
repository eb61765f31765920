#pragma once

// Run configuration: a flat UTF-8 `key = value` document. Angles are given in
// degrees, powers in Watts, bandwidth in Hz. Lines starting with '#' are comments.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efopa/abc.hpp"
#include "efopa/allocators.hpp"
#include "efopa/noma_rates.hpp"
#include "efopa/vlc_channel.hpp"

namespace efopa {

/// A gain given either absolutely or as a multiple of h0 ("2h0", "1.17*h0", "h0").
struct GainSpec {
    double value = 0.0;
    bool relative_to_h0 = false;

    double resolve(double h0) const noexcept { return relative_to_h0 ? value * h0 : value; }
    std::string to_string() const;
    static GainSpec parse(std::string_view text);
};

struct Waypoint {
    std::string label;
    Position position;
};

struct SweepSpec {
    double r_min = 0.01;
    double r_max = 1.0;
    double r_step = 0.01;
    GainSpec h1{2.0, true};
    std::vector<std::string> methods{"efopa", "grpa", "ngdpa", "oma"};

    std::vector<double> ratios() const;
};

struct RunConfig {
    // room.*
    double room_length = 6.0;
    double room_width = 6.0;
    double room_height = 3.0;
    Position tx{3.0, 3.0, 3.0};

    // optics.*
    VlcParams optics;

    // noma.*
    double p_max = 22.5;
    double bandwidth = 30e6;
    double noise_variance = 3e-12;
    RateModel rate_model = RateModel::Shannon;

    // grid.*
    ChannelGrid grid;
    std::string grid_description;

    // abc.* and the master seed
    AbcConfig abc;
    std::uint64_t seed = 1;

    // efopa.*
    std::optional<double> h0;  ///< empty: use the enumerated mean gain
    GainSpec derive_h1{2.0, true};
    MuMode mu_mode = MuMode::Transfer;
    double clamp_floor = 0.0;
    bool swap_stronger = false;
    RateModel objective_model = RateModel::LowerBound;

    SweepSpec sweep;

    // pairs.*
    std::size_t pairs_subsample = 0;  ///< 0: every pair

    // walk.*
    Position walk_fixed_rx{3.0, 3.0, 1.0};
    std::optional<double> walk_h1;  ///< empty: line-of-sight gain of the fixed receiver
    std::vector<Waypoint> waypoints;
    std::vector<std::string> walk_methods{"efopa", "grpa", "ngdpa", "oma"};

    /// FNV-1a 64 digest of the canonical key = value listing, hex encoded.
    std::string digest;
    /// Canonical listing (sorted keys, defaults included).
    std::string canonical;

    NoiseModel noise() const { return {noise_variance}; }
};

/// Every recognised key with its default value.
const std::map<std::string, std::string>& config_defaults();

/// Parses and validates. Throws ConfigError("config line N: field 'k': reason").
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Defaults only (the reference room and optics, ABC budget).
RunConfig default_config();

/// Splits "k = v" lines into a map, rejecting duplicates and malformed lines.
/// Values keep their line numbers for diagnostics.
struct KeyValue {
    std::string value;
    int line = 0;
};
std::map<std::string, KeyValue> parse_key_values(std::string_view text, std::string_view what);

}  // namespace efopa
