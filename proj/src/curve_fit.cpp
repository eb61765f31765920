#include "efopa/curve_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "efopa/error.hpp"

namespace efopa {

namespace {

using Vec4 = Eigen::Vector4d;

ExpFitCoefficients from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

double sum_squared_error(std::span<const FitPoint> points, const Vec4& x) {
    double sse = 0.0;
    for (const auto& pt : points) {
        const double e = x[0] * std::exp(x[1] * pt.r) + x[2] * std::exp(x[3] * pt.r) - pt.p1;
        sse += e * e;
    }
    return sse;
}

void residuals_and_jacobian(std::span<const FitPoint> points, const Vec4& x, Eigen::VectorXd& res,
                            Eigen::MatrixXd& jac) {
    const auto n = static_cast<Eigen::Index>(points.size());
    res.resize(n);
    jac.resize(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = points[i].r;
        const double eb = std::exp(x[1] * r);
        const double ed = std::exp(x[3] * r);
        res[i] = x[0] * eb + x[2] * ed - points[i].p1;
        jac(i, 0) = eb;
        jac(i, 1) = x[0] * r * eb;
        jac(i, 2) = ed;
        jac(i, 3) = x[2] * r * ed;
    }
}

// One Levenberg-Marquardt descent. Empty when the starting Jacobian is rank deficient.
std::optional<FitResult> descend(std::span<const FitPoint> points, const ExpFitCoefficients& start,
                                 const FitOptions& options) {
    Vec4 x(start.a, start.b, start.c, start.d);
    Eigen::VectorXd res;
    Eigen::MatrixXd jac;
    residuals_and_jacobian(points, x, res, jac);
    if (!res.allFinite() || !jac.allFinite()) return std::nullopt;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(1e-12);
    if (qr.rank() < 4) return std::nullopt;

    double sse = res.squaredNorm();
    double scale = 0.0;
    for (const auto& pt : points) scale += pt.p1 * pt.p1;

    FitResult out;
    out.report.sse_history.push_back(sse);
    double damping = options.initial_damping;

    while (out.report.iterations < options.max_iter) {
        if (sse <= 1e-32 * std::max(scale, 1e-300)) {
            out.report.converged = true;
            break;
        }
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Vec4 grad = jac.transpose() * res;
        const double diag_floor = 1e-15 * jtj.diagonal().maxCoeff();

        Eigen::Matrix4d damped = jtj;
        for (int k = 0; k < 4; ++k) damped(k, k) += damping * std::max(jtj(k, k), diag_floor);
        const Vec4 step = damped.ldlt().solve(-grad);
        ++out.report.iterations;

        const Vec4 trial = x + step;
        const double trial_sse = step.allFinite() ? sum_squared_error(points, trial) : std::numeric_limits<double>::infinity();
        if (std::isfinite(trial_sse) && trial_sse < sse) {
            const double improvement = (sse - trial_sse) / sse;
            x = trial;
            sse = trial_sse;
            out.report.sse_history.push_back(sse);
            damping = std::max(damping / 10.0, 1e-15);
            residuals_and_jacobian(points, x, res, jac);
            if (improvement < options.tol) {
                out.report.converged = true;
                break;
            }
        } else {
            damping *= 10.0;
            if (damping > 1e16) {
                // No descent direction left: a stationary point.
                out.report.converged = true;
                break;
            }
        }
    }

    out.coefficients = from_vec(x);
    out.report.sse = sse;
    out.report.rmse = std::sqrt(sse / static_cast<double>(points.size()));
    return out;
}

}  // namespace

double eval_two_term_exp(const ExpFitCoefficients& coeffs, double r) noexcept {
    return coeffs.a * std::exp(coeffs.b * r) + coeffs.c * std::exp(coeffs.d * r);
}

ExpFitCoefficients default_initial_guess(std::span<const FitPoint> points) {
    double top = 0.0;
    for (const auto& pt : points) top = std::max(top, pt.p1);
    return {top, 0.0, -top, -20.0};
}

std::vector<ExpFitCoefficients> multistart_guesses(const ExpFitCoefficients& init) {
    static constexpr double kDecayScale[] = {1.0, 0.25, 2.5, 5.0};
    static constexpr double kTransientScale[] = {1.0, 2.0, 0.5, -0.5};
    std::vector<ExpFitCoefficients> starts;
    for (double ds : kDecayScale) {
        for (double cs : kTransientScale) {
            starts.push_back({init.a, init.b, init.c * cs, init.d * ds});
        }
    }
    return starts;
}

FitResult fit_two_term_exp(std::span<const FitPoint> points, const ExpFitCoefficients& init,
                           const FitOptions& options) {
    if (points.size() < 4) throw PreconditionError("fit_two_term_exp: at least 4 points are required");
    std::vector<double> rs;
    rs.reserve(points.size());
    for (const auto& pt : points) {
        if (!std::isfinite(pt.r) || !std::isfinite(pt.p1)) {
            throw PreconditionError("fit_two_term_exp: non-finite data point");
        }
        rs.push_back(pt.r);
    }
    std::sort(rs.begin(), rs.end());
    if (std::adjacent_find(rs.begin(), rs.end()) != rs.end()) {
        throw PreconditionError("fit_two_term_exp: r values must be distinct");
    }

    const std::vector<ExpFitCoefficients> starts =
        options.multistart ? multistart_guesses(init) : std::vector<ExpFitCoefficients>{init};

    std::optional<FitResult> best;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        auto candidate = descend(points, starts[s], options);
        if (!candidate) continue;
        candidate->report.start_index = s;
        if (!best || candidate->report.sse < best->report.sse) best = std::move(candidate);
    }
    if (!best) throw RankDeficientError("fit_two_term_exp: Jacobian is singular at every starting point");
    return *std::move(best);
}

double fit_rmse(std::span<const FitPoint> points, const ExpFitCoefficients& coeffs) {
    double sse = 0.0;
    for (const auto& pt : points) {
        const double e = eval_two_term_exp(coeffs, pt.r) - pt.p1;
        sse += e * e;
    }
    return points.empty() ? 0.0 : std::sqrt(sse / static_cast<double>(points.size()));
}

}  // namespace efopa
