#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "efopa/error.hpp"
#include "efopa/vlc_channel.hpp"

using namespace efopa;

namespace {

VlcParams reference_optics() { return VlcParams{}; }

const Position kLed{3.0, 3.0, 3.0};

}  // namespace

TEST_CASE("lambertian order") {
    CHECK(lambertian_order(deg_to_rad(60.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lambertian_order(deg_to_rad(30.0)) == doctest::Approx(4.8188416793).epsilon(1e-9));

    const double wide = lambertian_order(deg_to_rad(89.9));
    CHECK(std::isfinite(wide));
    CHECK(wide > 0.0);

    CHECK_THROWS_AS(lambertian_order(0.0), DomainError);
    CHECK_THROWS_AS(lambertian_order(deg_to_rad(90.0)), DomainError);
    CHECK_THROWS_AS(lambertian_order(-0.1), DomainError);
}

TEST_CASE("concentrator gain") {
    VlcParams p = reference_optics();
    // Matches the tabulated optical lens gain of 3.
    CHECK(concentrator_gain(deg_to_rad(30.0), p) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(concentrator_gain(deg_to_rad(70.0), p) == 0.0);

    p.refractive_index = 1.0;
    p.fov = deg_to_rad(90.0);
    CHECK(concentrator_gain(deg_to_rad(60.0), p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(concentrator_gain(-0.01, p), PreconditionError);
}

TEST_CASE("radiant intensity") {
    CHECK(radiant_intensity(0.0, 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(radiant_intensity(deg_to_rad(60.0), 1.0) == doctest::Approx(0.1591549431).epsilon(1e-9));
    CHECK(radiant_intensity(deg_to_rad(90.0), 1.0) == 0.0);
}

TEST_CASE("geometry from positions") {
    const LinkGeometry vertical = geometry_from_positions(kLed, {3.0, 3.0, 1.0});
    CHECK(vertical.distance == doctest::Approx(2.0));
    CHECK(vertical.irradiance_angle == doctest::Approx(0.0));
    CHECK(vertical.incidence_angle == doctest::Approx(0.0));

    const LinkGeometry a = geometry_from_positions(kLed, {2.5, 1.5, 1.7});
    CHECK(a.distance == doctest::Approx(2.0469489490).epsilon(1e-9));
    CHECK(rad_to_deg(a.irradiance_angle) == doctest::Approx(50.5732244150).epsilon(1e-9));
    CHECK(a.irradiance_angle == a.incidence_angle);

    CHECK_THROWS_AS(geometry_from_positions(kLed, kLed), DegenerateError);
    CHECK_THROWS_AS(geometry_from_positions({3, 3, 1}, {3, 3, 2}), PreconditionError);
}

TEST_CASE("channel gains of the walking-man waypoints") {
    const VlcParams p = reference_optics();
    auto gain_at = [&](Position rx) { return channel_gain(geometry_from_positions(kLed, rx), p); };
    // Four significant figures of the published values.
    CHECK(gain_at({2.5, 1.5, 1.7}) == doctest::Approx(9.1924e-6).epsilon(5e-5));
    CHECK(gain_at({2.0, 2.5, 1.7}) == doctest::Approx(1.8671e-5).epsilon(5e-5));
    CHECK(gain_at({4.5, 4.0, 1.7}) == doctest::Approx(6.6131e-6).epsilon(5e-5));

    // Closed form for the laptop 2 m under the LED: A g (k+1) / (2 pi d^2).
    CHECK(gain_at({3.0, 3.0, 1.0}) == doctest::Approx(1e-4 * 3.0 * 2.0 / (2.0 * std::numbers::pi * 4.0)).epsilon(1e-12));
}

TEST_CASE("channel gain edge cases") {
    const VlcParams p = reference_optics();
    CHECK(channel_gain({1.0, 0.2, p.fov + 0.01}, p) == 0.0);
    CHECK(channel_gain({1.0, 0.2, p.fov}, p) > 0.0);
    CHECK_THROWS_AS(channel_gain({0.0, 0.1, 0.1}, p), DomainError);
}

TEST_CASE("channel gain is strictly decreasing in distance and both angles") {
    const VlcParams p = reference_optics();
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(0.1, 6.0);
    std::uniform_real_distribution<double> ang(0.0, p.fov);
    for (int trial = 0; trial < 500; ++trial) {
        double d1 = dist(gen), d2 = dist(gen);
        double a1 = ang(gen), a2 = ang(gen);
        double b1 = ang(gen), b2 = ang(gen);
        if (d1 > d2) std::swap(d1, d2);
        if (a1 > a2) std::swap(a1, a2);
        if (b1 > b2) std::swap(b1, b2);
        const double phi = ang(gen), psi = ang(gen), d = dist(gen);
        if (d1 < d2) CHECK(channel_gain({d1, phi, psi}, p) > channel_gain({d2, phi, psi}, p));
        if (a1 < a2) CHECK(channel_gain({d, a1, psi}, p) > channel_gain({d, a2, psi}, p));
        if (b1 < b2) CHECK(channel_gain({d, phi, b1}, p) > channel_gain({d, phi, b2}, p));
    }
}

TEST_CASE("irradiance/incidence symmetry at unit Lambertian order") {
    const VlcParams p = reference_optics();  // 60 deg semi-angle -> k = 1
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ang(0.0, p.fov);
    for (int trial = 0; trial < 200; ++trial) {
        const double x = ang(gen), y = ang(gen);
        CHECK(channel_gain({1.3, x, y}, p) == doctest::Approx(channel_gain({1.3, y, x}, p)).epsilon(1e-13));
    }
}

TEST_CASE("enumerate channels: toy grid") {
    ChannelGrid grid;
    grid.distances = {1.0, 2.0};
    grid.angles = {deg_to_rad(30.0), deg_to_rad(60.0)};
    const ChannelSet set = enumerate_channels(grid, reference_optics());
    CHECK(set.combo_count == 8);
    CHECK(set.unique_count() == 6);
    const double mean = std::accumulate(set.gains.begin(), set.gains.end(), 0.0) / 6.0;
    CHECK(set.mean_gain == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("enumerate channels: single triple") {
    ChannelGrid grid;
    grid.distances = {2.0};
    grid.angles = {deg_to_rad(10.0)};
    const VlcParams p = reference_optics();
    const ChannelSet set = enumerate_channels(grid, p);
    CHECK(set.combo_count == 1);
    REQUIRE(set.unique_count() == 1);
    CHECK(set.mean_gain == channel_gain({2.0, deg_to_rad(10.0), deg_to_rad(10.0)}, p));
}

TEST_CASE("enumerate channels: reference grid structure") {
    const ChannelGrid grid = ChannelGrid::reference();
    CHECK(grid.distances.size() == 21);
    CHECK(grid.angles.size() == 12);
    const ChannelSet set = enumerate_channels(grid, reference_optics());
    CHECK(set.combo_count == 3024);
    for (std::size_t i = 1; i < set.gains.size(); ++i) REQUIRE(set.gains[i] > set.gains[i - 1]);
    for (double g : set.gains) REQUIRE(g > 0.0);
    const double mean = std::accumulate(set.gains.begin(), set.gains.end(), 0.0) / static_cast<double>(set.gains.size());
    CHECK(std::abs(set.mean_gain - mean) <= 1e-12 * mean);

    // Independent brute force: distinct values within the same relative tolerance.
    std::vector<double> all;
    for (double d : grid.distances)
        for (double a : grid.angles)
            for (double b : grid.angles) all.push_back(channel_gain({d, a, b}, reference_optics()));
    std::set<double> exact(all.begin(), all.end());
    CHECK(set.unique_count() <= exact.size());
    // The k = 1 symmetry alone removes at least the 66 mirrored pairs per distance.
    CHECK(set.unique_count() <= 21 * 78);
}

TEST_CASE("enumerate channels rejects invalid grids") {
    const VlcParams p = reference_optics();
    ChannelGrid grid;
    CHECK_THROWS_AS(enumerate_channels(grid, p), PreconditionError);
    grid.distances = {1.0};
    grid.angles = {deg_to_rad(70.0)};
    CHECK_THROWS_AS(enumerate_channels(grid, p), PreconditionError);
    grid.angles = {deg_to_rad(10.0)};
    grid.dedup_tolerance = -1.0;
    CHECK_THROWS_AS(enumerate_channels(grid, p), PreconditionError);
}

TEST_CASE("params validation names the field") {
    VlcParams p;
    p.fov = 0.0;
    try {
        p.validate();
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("fov") != std::string::npos);
    }
}
