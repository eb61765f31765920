#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "efopa/curve_fit.hpp"
#include "efopa/error.hpp"

using namespace efopa;

namespace {

std::vector<FitPoint> sample(const ExpFitCoefficients& c, double noise = 0.0, std::uint64_t seed = 1) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n(0.0, noise > 0.0 ? noise : 1.0);
    std::vector<FitPoint> pts;
    for (int i = 1; i <= 100; ++i) {
        const double r = 0.01 * i;
        pts.push_back({r, eval_two_term_exp(c, r) + (noise > 0.0 ? n(gen) : 0.0)});
    }
    return pts;
}

}  // namespace

TEST_CASE("published curve values") {
    CHECK(eval_two_term_exp(kPublishedFit, 0.0963) == doctest::Approx(0.0790352).epsilon(1e-5));
    CHECK(eval_two_term_exp(kPublishedFit, 1.0) == doctest::Approx(0.1031052).epsilon(1e-6));
    CHECK(eval_two_term_exp(kPublishedFit, 0.19553) == doctest::Approx(0.098594).epsilon(1e-5));
    CHECK(eval_two_term_exp(kPublishedFit, 0.01) == doctest::Approx(-0.016560).epsilon(1e-4));
    CHECK(eval_two_term_exp({1.0, 0.0, 0.0, 0.0}, 0.3) == 1.0);
}

TEST_CASE("published curve is increasing on (0, 1]") {
    double prev = eval_two_term_exp(kPublishedFit, 0.001);
    for (int i = 2; i <= 1000; ++i) {
        const double v = eval_two_term_exp(kPublishedFit, 0.001 * i);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("noise-free recovery") {
    const auto pts = sample(kPublishedFit);
    const auto res = fit_two_term_exp(pts, default_initial_guess(pts));
    CHECK(res.report.converged);
    CHECK(res.report.rmse < 1e-6);
    for (const auto& p : pts) CHECK(std::abs(eval_two_term_exp(res.coefficients, p.r) - p.p1) < 1e-6);
}

TEST_CASE("noisy fit stays near the truth") {
    const auto pts = sample(kPublishedFit, 1e-4, 3);
    const auto res = fit_two_term_exp(pts, default_initial_guess(pts));
    CHECK(res.report.rmse < 2e-4);
    for (double r = 0.05; r <= 1.0; r += 0.05)
        CHECK(std::abs(eval_two_term_exp(res.coefficients, r) - eval_two_term_exp(kPublishedFit, r)) < 1e-3);
}

TEST_CASE("SSE history is non-increasing and rmse improves on the initial guess") {
    const auto pts = sample({0.2, 0.05, -0.15, -8.0}, 5e-5, 8);
    const auto init = default_initial_guess(pts);
    FitOptions opt;
    opt.multistart = false;
    const auto res = fit_two_term_exp(pts, init, opt);
    REQUIRE(!res.report.sse_history.empty());
    for (std::size_t i = 1; i < res.report.sse_history.size(); ++i)
        CHECK(res.report.sse_history[i] <= res.report.sse_history[i - 1]);
    CHECK(res.report.rmse <= fit_rmse(pts, init));
    CHECK(res.report.start_index == 0u);
    CHECK(res.report.sse == doctest::Approx(res.report.rmse * res.report.rmse * pts.size()));
}

TEST_CASE("term exchange gives the same curve") {
    const ExpFitCoefficients swapped{kPublishedFit.c, kPublishedFit.d, kPublishedFit.a, kPublishedFit.b};
    for (double r = 0.0; r <= 1.0; r += 0.1)
        CHECK(eval_two_term_exp(swapped, r) == doctest::Approx(eval_two_term_exp(kPublishedFit, r)));
    const auto pts = sample(swapped);
    const auto res = fit_two_term_exp(pts, default_initial_guess(pts));
    CHECK(res.report.rmse < 1e-6);
}

TEST_CASE("initial guess and multistart") {
    const std::vector<FitPoint> pts{{0.1, 0.05}, {0.2, 0.08}, {0.5, 0.11}, {1.0, 0.09}};
    const auto g = default_initial_guess(pts);
    CHECK(g.a == 0.11);
    CHECK(g.b == 0.0);
    CHECK(g.c == -0.11);
    CHECK(g.d == -20.0);
    const auto starts = multistart_guesses(g);
    CHECK(starts.size() == 16u);
    CHECK(starts.front() == g);
}

TEST_CASE("invalid data") {
    const std::vector<FitPoint> three{{0.1, 0.05}, {0.2, 0.08}, {0.5, 0.11}};
    CHECK_THROWS_AS(fit_two_term_exp(three, kPublishedFit), PreconditionError);
    const std::vector<FitPoint> repeated{{0.1, 0.05}, {0.1, 0.06}, {0.5, 0.11}, {0.5, 0.1}, {0.5, 0.12}};
    CHECK_THROWS_AS(fit_two_term_exp(repeated, kPublishedFit), PreconditionError);
    const std::vector<FitPoint> nonfinite{{0.1, 0.05}, {0.2, NAN}, {0.5, 0.11}, {0.6, 0.1}};
    CHECK_THROWS_AS(fit_two_term_exp(nonfinite, kPublishedFit), PreconditionError);
}

TEST_CASE("rank deficiency") {
    const auto pts = sample(kPublishedFit);
    // Zero amplitudes and equal rates: the b and d columns vanish and a, c coincide.
    FitOptions opt;
    opt.multistart = false;
    CHECK_THROWS_AS(fit_two_term_exp(pts, {0.0, 1.0, 0.0, 1.0}, opt), RankDeficientError);
}
