#include "efopa/allocators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "efopa/error.hpp"

namespace efopa {

namespace {

void check_pair(double h1, double h2, const char* who) {
    if (!(h1 > 0.0) || !(h2 > 0.0)) throw PreconditionError(std::string(who) + ": channel gains must be > 0");
    if (h2 > h1) throw OrderingError(std::string(who) + ": h2 must not exceed h1");
}

AllocationVector two_user(double p_strong, double p_max) {
    return {{p_strong, p_max - p_strong}, p_max};
}

}  // namespace

std::string_view to_string(MuMode mode) noexcept {
    return mode == MuMode::Transfer ? "transfer" : "direct";
}

MuMode parse_mu_mode(std::string_view name) {
    if (name == "transfer") return MuMode::Transfer;
    if (name == "direct") return MuMode::Direct;
    throw PreconditionError("unknown mu mode '" + std::string(name) + "'");
}

void EfopaModel::validate() const {
    if (!(h_ref > 0.0)) throw PreconditionError("model: h_ref must be > 0");
    if (!(p_ref > 0.0)) throw PreconditionError("model: p_ref must be > 0");
    if (!(h0 > 0.0)) throw PreconditionError("model: h0 must be > 0");
    if (!(clamp_floor >= 0.0)) throw PreconditionError("model: clamp_floor must be >= 0");
    for (double v : {coefficients.a, coefficients.b, coefficients.c, coefficients.d}) {
        if (!std::isfinite(v)) throw PreconditionError("model: coefficients must be finite");
    }
}

EfopaModel EfopaModel::published() {
    EfopaModel m;
    m.coefficients = kPublishedFit;
    return m;
}

void TwoUserInstance::validate() const {
    if (!(p_max > 0.0)) throw PreconditionError("instance: p_max must be > 0");
    if (!(bandwidth > 0.0)) throw PreconditionError("instance: bandwidth must be > 0");
    if (!(noise_variance > 0.0)) throw PreconditionError("instance: noise variance must be > 0");
    check_pair(h_strong, h_weak, "instance");
}

double fairness_objective(double p1, const TwoUserInstance& inst, RateModel model) {
    if (!(p1 >= 0.0 && p1 <= inst.p_max)) throw PreconditionError("fairness_objective: p1 outside [0, p_max]");
    const std::array<UserLink, 2> links{{{inst.h_strong, inst.bandwidth}, {inst.h_weak, inst.bandwidth}}};
    const AllocationVector alloc = two_user(p1, inst.p_max);
    const NoiseModel noise{inst.noise_variance};
    const std::array<double, 2> rates{rate_noma(0, links, alloc, noise, model),
                                      rate_noma(1, links, alloc, noise, model)};
    return jain_index(rates);
}

double optimize_fair_two_user(const TwoUserInstance& inst, const AbcConfig& abc, RateModel model) {
    inst.validate();
    const auto objective = [&](std::span<const double> x) { return fairness_objective(x[0], inst, model); };
    const OptimizationResult result = abc_maximize(objective, SearchSpace::interval(0.0, inst.p_max / 2.0), abc);
    return result.best_position[0];
}

std::vector<DatasetPoint> build_efopa_dataset(double h1, const ChannelSet& channels, const DatasetOptions& options) {
    if (!(h1 > 0.0)) throw PreconditionError("build_efopa_dataset: h1 must be > 0");
    if (channels.gains.empty()) throw PreconditionError("build_efopa_dataset: empty channel set");

    std::vector<DatasetPoint> points;
    for (std::size_t m = 0; m < channels.gains.size(); ++m) {
        double strong = h1;
        double weak = channels.gains[m];
        if (weak > strong) {
            if (!options.swap_stronger) continue;
            std::swap(strong, weak);
        }
        TwoUserInstance inst{strong, weak, options.p_max, options.bandwidth, options.noise_variance};
        AbcConfig abc = options.abc;
        abc.stream = m;
        points.push_back({weak / strong, optimize_fair_two_user(inst, abc, options.model), strong, weak});
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const DatasetPoint& a, const DatasetPoint& b) { return a.r < b.r; });
    return points;
}

double efopa_mu(const EfopaModel& model, double h1, double p_new) {
    return (model.h_ref / h1) * std::sqrt(p_new / model.p_ref);
}

AllocationVector efopa_allocate(const EfopaModel& model, double h1, double h2, double p_new) {
    check_pair(h1, h2, "efopa_allocate");
    if (!(p_new > 0.0)) throw PreconditionError("efopa_allocate: total power must be > 0");
    const double raw = eval_two_term_exp(model.coefficients, h2 / h1);
    const double mu = model.mu_mode == MuMode::Transfer ? efopa_mu(model, h1, p_new) : 1.0;
    const double p1 = std::min(std::max(mu * raw, model.clamp_floor), p_new / 2.0);
    return two_user(p1, p_new);
}

AllocationVector grpa_allocate(double h1, double h2, double p_max) {
    check_pair(h1, h2, "grpa_allocate");
    const double r2 = (h2 / h1) * (h2 / h1);
    return two_user(p_max * r2 / (1.0 + r2), p_max);
}

AllocationVector ngdpa_allocate(double h1, double h2, double p_max) {
    check_pair(h1, h2, "ngdpa_allocate");
    const double r = h2 / h1;
    return two_user(p_max * (1.0 - r) / (2.0 - r), p_max);
}

OmaAllocation oma_allocate(double p_max, std::size_t user_count) {
    if (user_count < 1) throw PreconditionError("oma_allocate: user count must be >= 1");
    if (!(p_max > 0.0)) throw PreconditionError("oma_allocate: p_max must be > 0");
    return {p_max, user_count};
}

}  // namespace efopa
