#pragma once

// Two-term exponential model p1(r) = a e^{b r} + c e^{d r} and its damped
// least-squares (Levenberg-Marquardt) fit.

#include <cstddef>
#include <span>
#include <vector>

namespace efopa {

struct ExpFitCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    friend bool operator==(const ExpFitCoefficients&, const ExpFitCoefficients&) = default;
};

/// Published fit of the fairness-optimal strong-user power at h1 = 2 h0, P = 22.5 W.
inline constexpr ExpFitCoefficients kPublishedFit{0.1018, 0.01274, -0.1432, -19.04};

struct FitPoint {
    double r = 0.0;   ///< channel ratio h2 / h1
    double p1 = 0.0;  ///< strong-user power [W]
};

struct FitReport {
    double rmse = 0.0;  ///< [W]
    double sse = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t start_index = 0;      ///< which multistart guess won
    std::vector<double> sse_history;  ///< SSE after initialization and every accepted step
};

struct FitOptions {
    std::size_t max_iter = 500;
    double tol = 1e-12;  ///< relative SSE improvement
    double initial_damping = 1e-3;
    bool multistart = true;
};

struct FitResult {
    ExpFitCoefficients coefficients;
    FitReport report;
};

double eval_two_term_exp(const ExpFitCoefficients& coeffs, double r) noexcept;

/// a = max p1, b = 0, c = -a, d = -20.
ExpFitCoefficients default_initial_guess(std::span<const FitPoint> points);

/// The 16 starting points tried when multistart is enabled; `init` comes first.
std::vector<ExpFitCoefficients> multistart_guesses(const ExpFitCoefficients& init);

/// Needs at least 4 points with distinct r. Non-convergence is reported through
/// FitReport::converged; RankDeficientError is thrown only when every start has a
/// singular Jacobian.
FitResult fit_two_term_exp(std::span<const FitPoint> points, const ExpFitCoefficients& init,
                           const FitOptions& options = {});

/// Root-mean-square of model minus data.
double fit_rmse(std::span<const FitPoint> points, const ExpFitCoefficients& coeffs);

}  // namespace efopa
