#pragma once

// Bounded continuous Artificial Bee Colony maximizer and a brute-force 1-D grid
// search used as its reference oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace efopa {

struct SearchSpace {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dims() const noexcept { return lower.size(); }
    void validate() const;

    static SearchSpace interval(double lo, double hi) { return {{lo}, {hi}}; }
};

struct AbcConfig {
    std::size_t food_count = 10;         ///< SN, number of food sources (= employed bees)
    std::size_t max_evaluations = 4000;  ///< MaxFE, counts every objective call
    std::size_t limit = 10;              ///< trials without improvement before a scout
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;            ///< independent PRNG stream index

    void validate() const;
};

struct FoodSource {
    std::vector<double> position;
    double objective = 0.0;
    std::size_t trials = 0;
};

struct OptimizationResult {
    std::vector<double> best_position;
    double best_objective = 0.0;
    std::size_t evaluations_used = 0;
    std::vector<double> trace;  ///< best-so-far objective after initialization and each cycle

    friend bool operator==(const OptimizationResult&, const OptimizationResult&) = default;
};

using Objective = std::function<double(std::span<const double>)>;

/// Maximizes `objective` over the box. The run stops as soon as `max_evaluations`
/// objective calls have been made and returns the best point ever evaluated.
/// Throws ObjectiveError if the objective returns a non-finite value.
OptimizationResult abc_maximize(const Objective& objective, const SearchSpace& space, const AbcConfig& config);

/// Evaluates a 1-D objective on `resolution` uniformly spaced points including both
/// bounds; with `refine`, repeats once on a grid 100x denser spanning one coarse step
/// either side of the incumbent. Ties keep the smallest coordinate.
OptimizationResult grid_maximize(const Objective& objective, const SearchSpace& space, std::size_t resolution,
                                 bool refine = true);

}  // namespace efopa
