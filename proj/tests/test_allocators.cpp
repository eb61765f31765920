#include <doctest.h>

#include <cmath>
#include <random>

#include "efopa/allocators.hpp"
#include "efopa/error.hpp"

using namespace efopa;

namespace {

constexpr double kLaptop = 9.5493e-5;
constexpr double kWaypointA = 9.1924e-6;

ChannelSet three_channels() {
    ChannelSet set;
    set.gains = {2e-5, 6e-5, 1.2e-4};
    set.combo_count = 3;
    set.mean_gain = (2e-5 + 6e-5 + 1.2e-4) / 3.0;
    return set;
}

}  // namespace

TEST_CASE("mu for the walking-man example") {
    const auto model = EfopaModel::published();
    CHECK(efopa_mu(model, kLaptop, 22.5) == doctest::Approx(1.6575874671).epsilon(1e-9));
    CHECK(efopa_mu(model, model.h_ref, model.p_ref) == doctest::Approx(1.0));
    CHECK(efopa_mu(model, model.h_ref, 4.0 * model.p_ref) == doctest::Approx(2.0));
}

TEST_CASE("EFOPA allocation in both mu modes") {
    auto model = EfopaModel::published();
    model.mu_mode = MuMode::Direct;
    const auto plain = efopa_allocate(model, kLaptop, kWaypointA, 22.5);
    CHECK(plain.powers[0] == doctest::Approx(eval_two_term_exp(kPublishedFit, kWaypointA / kLaptop)));
    CHECK(plain.powers[0] == doctest::Approx(0.0790).epsilon(1e-3));
    CHECK(plain.powers[0] + plain.powers[1] == doctest::Approx(22.5));

    model.mu_mode = MuMode::Transfer;
    const auto scaled = efopa_allocate(model, kLaptop, kWaypointA, 22.5);
    CHECK(scaled.powers[0] == doctest::Approx(1.6575874671 * plain.powers[0]));
}

TEST_CASE("EFOPA clamping") {
    auto model = EfopaModel::published();
    // Fit is negative for small r.
    const auto low = efopa_allocate(model, model.h_ref, 0.005 * model.h_ref, 22.5);
    CHECK(low.powers[0] == 0.0);
    model.clamp_floor = 0.01;
    CHECK(efopa_allocate(model, model.h_ref, 0.005 * model.h_ref, 22.5).powers[0] == 0.01);
    // Tiny h1 blows mu up; p1 never exceeds half the budget.
    const auto high = efopa_allocate(model, 1e-9, 1e-9, 22.5);
    CHECK(high.powers[0] == doctest::Approx(11.25));
    CHECK(high.powers[1] == doctest::Approx(11.25));
}

TEST_CASE("EFOPA input errors") {
    const auto model = EfopaModel::published();
    CHECK_THROWS_AS(efopa_allocate(model, 1e-5, 2e-5, 22.5), OrderingError);
    CHECK_THROWS_AS(efopa_allocate(model, 1e-5, 0.0, 22.5), PreconditionError);
    CHECK_THROWS_AS(efopa_allocate(model, 1e-5, 1e-6, 0.0), PreconditionError);
    auto bad = model;
    bad.h_ref = 0.0;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    CHECK(parse_mu_mode("transfer") == MuMode::Transfer);
    CHECK(parse_mu_mode("direct") == MuMode::Direct);
    CHECK_THROWS_AS(parse_mu_mode("auto"), PreconditionError);
}

TEST_CASE("GRPA and NGDPA") {
    const auto g = grpa_allocate(kLaptop, kWaypointA, 22.5);
    CHECK(g.powers[0] == doctest::Approx(0.206581498026).epsilon(1e-9));
    const double r = kWaypointA / kLaptop;
    CHECK(g.powers[1] == doctest::Approx(g.powers[0] / (r * r)));

    const auto n = ngdpa_allocate(kLaptop, kWaypointA, 22.5);
    CHECK(n.powers[0] / n.powers[1] == doctest::Approx(1.0 - r));
    CHECK(n.powers[0] == doctest::Approx(22.5 * (1.0 - r) / (2.0 - r)));

    // Equal gains split the budget evenly for GRPA and hand NGDPA's strong user nothing.
    CHECK(grpa_allocate(1e-4, 1e-4, 10.0).powers[0] == doctest::Approx(5.0));
    CHECK(ngdpa_allocate(1e-4, 1e-4, 10.0).powers[0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(grpa_allocate(1e-5, 1e-4, 10.0), OrderingError);
    CHECK_THROWS_AS(ngdpa_allocate(1e-5, 1e-4, 10.0), OrderingError);
}

TEST_CASE("allocation properties over random pairs") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> gain(1e-6, 2e-4);
    std::uniform_real_distribution<double> power(0.5, 40.0);
    const auto model = EfopaModel::published();
    for (int i = 0; i < 1000; ++i) {
        double h1 = gain(gen), h2 = gain(gen);
        if (h1 < h2) std::swap(h1, h2);
        const double p = power(gen);
        for (const auto& a : {efopa_allocate(model, h1, h2, p), grpa_allocate(h1, h2, p), ngdpa_allocate(h1, h2, p)}) {
            REQUIRE(a.powers.size() == 2u);
            CHECK(a.powers[0] + a.powers[1] == doctest::Approx(p).epsilon(1e-12));
            CHECK(a.powers[0] >= 0.0);
            CHECK(a.powers[0] <= a.powers[1] * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("OMA") {
    const auto o = oma_allocate(22.5, 2);
    CHECK(o.slot_power == 22.5);
    CHECK(o.time_share() == 0.5);
    CHECK_THROWS_AS(oma_allocate(22.5, 0), PreconditionError);
}

TEST_CASE("fairness objective") {
    TwoUserInstance inst{2.0 * kPublishedH0, kPublishedH0, 22.5, 30e6, 3e-12};
    CHECK(fairness_objective(0.0, inst) == doctest::Approx(0.5));
    const double mid = fairness_objective(0.1, inst);
    CHECK(mid > 0.95);
    CHECK(mid <= 1.0);
    CHECK_THROWS_AS(fairness_objective(-0.1, inst), PreconditionError);
    inst.h_weak = 3.0 * kPublishedH0;
    CHECK_THROWS_AS(fairness_objective(0.1, inst), OrderingError);
}

TEST_CASE("fair two-user optimum matches a grid search") {
    const TwoUserInstance inst{2.0 * kPublishedH0, 0.5 * 2.0 * kPublishedH0, 22.5, 30e6, 3e-12};
    auto obj = [&](std::span<const double> x) { return fairness_objective(x[0], inst); };
    const auto grid = grid_maximize(obj, SearchSpace::interval(0.0, 11.25), 2001);
    AbcConfig abc;
    abc.seed = 3;
    const double p1 = optimize_fair_two_user(inst, abc);
    CHECK(p1 == doctest::Approx(grid.best_position[0]).epsilon(1e-2));
    CHECK(fairness_objective(p1, inst) == doctest::Approx(grid.best_objective).epsilon(1e-6));
}

TEST_CASE("dataset builder") {
    const auto channels = three_channels();
    DatasetOptions opt;
    opt.abc.max_evaluations = 1000;
    const auto data = build_efopa_dataset(6e-5, channels, opt);
    REQUIRE(data.size() == 2u);  // 1.2e-4 is stronger than h1 and skipped
    CHECK(data[0].r == doctest::Approx(2e-5 / 6e-5));
    CHECK(data[1].r == doctest::Approx(1.0));
    for (const auto& d : data) {
        CHECK(d.h_strong == 6e-5);
        CHECK(d.p1 >= 0.0);
        CHECK(d.p1 <= 11.25);
    }

    opt.swap_stronger = true;
    const auto swapped = build_efopa_dataset(6e-5, channels, opt);
    REQUIRE(swapped.size() == 3u);
    CHECK(swapped[1].r == doctest::Approx(0.5));
    CHECK(swapped[1].h_strong == 1.2e-4);
    CHECK(swapped[1].h_weak == 6e-5);
    for (std::size_t i = 1; i < swapped.size(); ++i) CHECK(swapped[i].r >= swapped[i - 1].r);

    // Same seed, same dataset.
    CHECK(build_efopa_dataset(6e-5, channels, opt).back().p1 == swapped.back().p1);

    ChannelSet single;
    single.gains = {5e-5};
    single.combo_count = 1;
    single.mean_gain = 5e-5;
    const auto one = build_efopa_dataset(5e-5, single, opt);
    REQUIRE(one.size() == 1u);
    CHECK(one[0].r == 1.0);

    CHECK_THROWS_AS(build_efopa_dataset(5e-5, ChannelSet{}, opt), PreconditionError);
}
