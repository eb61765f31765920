#include "efopa/abc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "efopa/error.hpp"
#include "efopa/rng.hpp"

namespace efopa {

void SearchSpace::validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
        throw PreconditionError("search space: need matching, non-empty lower/upper bounds");
    }
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!(lower[j] < upper[j])) throw PreconditionError("search space: lower < upper required in every dimension");
    }
}

void AbcConfig::validate() const {
    if (food_count < 2) throw PreconditionError("abc: food_count must be >= 2");
    if (max_evaluations < food_count) throw PreconditionError("abc: max_evaluations must be >= food_count");
    if (limit < 1) throw PreconditionError("abc: limit must be >= 1");
}

namespace {

// Owns the evaluation counter and the best-ever bookkeeping shared by both searches.
class Evaluator {
public:
    Evaluator(const Objective& objective, std::size_t dims) : objective_(objective) {
        best_.best_position.assign(dims, 0.0);
        best_.best_objective = -std::numeric_limits<double>::infinity();
    }

    double operator()(const std::vector<double>& x) {
        const double value = objective_(std::span<const double>(x));
        ++best_.evaluations_used;
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "objective returned " << value << " at x = [";
            for (std::size_t j = 0; j < x.size(); ++j) msg << (j ? ", " : "") << x[j];
            msg << "] (evaluation " << best_.evaluations_used << ")";
            throw ObjectiveError(msg.str());
        }
        if (value > best_.best_objective) {
            best_.best_objective = value;
            best_.best_position = x;
        }
        return value;
    }

    std::size_t used() const noexcept { return best_.evaluations_used; }
    void mark_cycle() { best_.trace.push_back(best_.best_objective); }
    OptimizationResult take() { return std::move(best_); }

private:
    const Objective& objective_;
    OptimizationResult best_;
};

}  // namespace

OptimizationResult abc_maximize(const Objective& objective, const SearchSpace& space, const AbcConfig& config) {
    space.validate();
    config.validate();

    const std::size_t dims = space.dims();
    const std::size_t sn = config.food_count;
    Rng rng(config.seed, config.stream);
    Evaluator evaluate(objective, dims);
    auto budget_left = [&] { return evaluate.used() < config.max_evaluations; };

    auto random_position = [&] {
        std::vector<double> x(dims);
        for (std::size_t j = 0; j < dims; ++j) x[j] = rng.uniform(space.lower[j], space.upper[j]);
        return x;
    };

    std::vector<FoodSource> foods(sn);
    for (auto& food : foods) {
        food.position = random_position();
        food.objective = evaluate(food.position);
    }
    evaluate.mark_cycle();

    // v_ij = x_ij + phi (x_ij - x_mj), one random dimension, greedy selection.
    auto explore = [&](std::size_t i) {
        std::size_t partner = rng.index(sn - 1);
        if (partner >= i) ++partner;
        const std::size_t j = rng.index(dims);
        const double phi = rng.uniform(-1.0, 1.0);

        std::vector<double> candidate = foods[i].position;
        const double xij = candidate[j];
        candidate[j] = std::clamp(xij + phi * (xij - foods[partner].position[j]), space.lower[j], space.upper[j]);

        const double value = evaluate(candidate);
        if (value > foods[i].objective) {
            foods[i].position = std::move(candidate);
            foods[i].objective = value;
            foods[i].trials = 0;
        } else {
            foods[i].trials = std::min(foods[i].trials + 1, config.limit + 1);
        }
    };

    std::vector<double> cumulative(sn);
    while (budget_left()) {
        // Employed bees.
        for (std::size_t i = 0; i < sn && budget_left(); ++i) explore(i);

        // Onlooker bees: roulette over a non-negative transform of the objective.
        double floor = 0.0;
        for (const auto& food : foods) floor = std::min(floor, food.objective);
        double total = 0.0;
        for (std::size_t i = 0; i < sn; ++i) {
            total += foods[i].objective - floor;
            cumulative[i] = total;
        }
        for (std::size_t t = 0; t < sn && budget_left(); ++t) {
            std::size_t chosen = 0;
            if (total > 0.0) {
                const double u = rng.uniform() * total;
                chosen = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                  cumulative.begin());
                chosen = std::min(chosen, sn - 1);
            } else {
                chosen = rng.index(sn);
            }
            explore(chosen);
        }

        // Scout bee: at most one exhausted source per cycle.
        if (budget_left()) {
            std::size_t worn = sn;
            for (std::size_t i = 0; i < sn; ++i) {
                if (foods[i].trials > config.limit && (worn == sn || foods[i].trials > foods[worn].trials)) worn = i;
            }
            if (worn != sn) {
                foods[worn].position = random_position();
                foods[worn].objective = evaluate(foods[worn].position);
                foods[worn].trials = 0;
            }
        }
        evaluate.mark_cycle();
    }
    return evaluate.take();
}

OptimizationResult grid_maximize(const Objective& objective, const SearchSpace& space, std::size_t resolution,
                                 bool refine) {
    space.validate();
    if (space.dims() != 1) throw PreconditionError("grid_maximize: only 1-D search spaces are supported");
    if (resolution < 2) throw PreconditionError("grid_maximize: resolution must be >= 2");

    const double lo = space.lower[0];
    const double hi = space.upper[0];

    auto sweep = [&objective](double a, double b, std::size_t n) {
        Evaluator evaluate(objective, 1);
        std::vector<double> x(1);
        for (std::size_t i = 0; i < n; ++i) {
            x[0] = (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
            evaluate(x);
        }
        evaluate.mark_cycle();
        return evaluate.take();
    };

    OptimizationResult result = sweep(lo, hi, resolution);
    if (!refine) return result;

    const double step = (hi - lo) / static_cast<double>(resolution - 1);
    const double centre = result.best_position[0];
    const double a = std::max(lo, centre - step);
    const double b = std::min(hi, centre + step);
    const auto n = static_cast<std::size_t>(std::llround((b - a) / step * 100.0)) + 1;
    const OptimizationResult fine = sweep(a, b, n);

    if (fine.best_objective > result.best_objective) {
        result.best_objective = fine.best_objective;
        result.best_position = fine.best_position;
    }
    result.evaluations_used += fine.evaluations_used;
    result.trace.push_back(result.best_objective);
    return result;
}

}  // namespace efopa
