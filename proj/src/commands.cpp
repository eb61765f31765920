#include "efopa/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "efopa/error.hpp"
#include "efopa/rng.hpp"
#include "efopa/table_io.hpp"

namespace efopa {

namespace {

Provenance provenance(const std::string& command, const RunConfig& config) {
    return {command, config.digest, config.seed, {}};
}

RateSetup rate_setup(const RunConfig& config) {
    return {config.bandwidth, config.noise(), config.rate_model};
}

std::string rate_model_name(const RunConfig& config) { return std::string(to_string(config.rate_model)); }

}  // namespace

double reference_h0(const RunConfig& config) {
    if (config.h0) return *config.h0;
    return enumerate_channels(config.grid, config.optics).mean_gain;
}

// ---- channels --------------------------------------------------------------

ChannelsOutput cmd_channels(const RunConfig& config) {
    ChannelsOutput out;
    out.channels = enumerate_channels(config.grid, config.optics);
    Provenance prov = provenance("channels", config);
    prov.extra = {
        {"grid", config.grid_description},
        {"combo_count", std::to_string(out.channels.combo_count)},
        {"unique_count", std::to_string(out.channels.unique_count())},
        {"dedup_tolerance", format_exact(out.channels.dedup_tolerance)},
        {"h0", format_sci(out.channels.mean_gain)},
    };
    out.file = provenance_header(prov);
    out.file += csv_line({"index", "gain"});
    for (std::size_t i = 0; i < out.channels.gains.size(); ++i) {
        out.file += csv_line({std::to_string(i), format_sci(out.channels.gains[i])});
    }
    return out;
}

// ---- derive ----------------------------------------------------------------

DeriveOutput cmd_derive(const RunConfig& config) {
    ChannelSet channels = enumerate_channels(config.grid, config.optics);
    const double h0 = config.h0.value_or(channels.mean_gain);
    return cmd_derive(config, config.derive_h1.resolve(h0), config.p_max);
}

DeriveOutput cmd_derive(const RunConfig& config, double h1, double p_max) {
    DeriveOutput out;
    out.channels = enumerate_channels(config.grid, config.optics);
    out.h0 = config.h0.value_or(out.channels.mean_gain);
    out.h1 = h1;

    DatasetOptions opts;
    opts.p_max = p_max;
    opts.bandwidth = config.bandwidth;
    opts.noise_variance = config.noise_variance;
    opts.model = config.objective_model;
    opts.abc = config.abc;
    opts.abc.seed = config.seed;
    opts.swap_stronger = config.swap_stronger;
    out.dataset = build_efopa_dataset(h1, out.channels, opts);

    std::vector<FitPoint> points;
    points.reserve(out.dataset.size());
    for (const auto& pt : out.dataset) {
        // Equal ratios can only come from swapped runs; keep the first.
        if (!points.empty() && points.back().r == pt.r) continue;
        points.push_back({pt.r, pt.p1});
    }
    out.fit = fit_two_term_exp(points, default_initial_guess(points));

    out.model.coefficients = out.fit.coefficients;
    out.model.h_ref = h1;
    out.model.p_ref = p_max;
    out.model.h0 = out.h0;
    out.model.mu_mode = config.mu_mode;
    out.model.clamp_floor = config.clamp_floor;

    const ModelMetadata meta{
        {"tool_version", std::string(kToolVersion)},
        {"config_digest", config.digest},
        {"seed", std::to_string(config.seed)},
        {"grid", config.grid_description},
        {"combo_count", std::to_string(out.channels.combo_count)},
        {"unique_count", std::to_string(out.channels.unique_count())},
        {"objective_rate_model", std::string(to_string(config.objective_model))},
        {"dataset_points", std::to_string(out.dataset.size())},
        {"fit_converged", out.fit.report.converged ? "true" : "false"},
        {"fit_rmse", format_sci(out.fit.report.rmse)},
        {"fit_iterations", std::to_string(out.fit.report.iterations)},
        {"fit_start", std::to_string(out.fit.report.start_index)},
    };
    out.model_file = serialize_model(out.model, meta);

    Provenance prov = provenance("derive", config);
    prov.extra = {{"h0", format_sci(out.h0)}, {"h1", format_sci(h1)}, {"p_max", format_sci(p_max)}};
    out.dataset_file = provenance_header(prov);
    out.dataset_file += csv_line({"r", "p1", "h_strong", "h_weak"});
    for (const auto& pt : out.dataset) {
        out.dataset_file += csv_line({format_sci(pt.r), format_sci(pt.p1), format_sci(pt.h_strong), format_sci(pt.h_weak)});
    }
    return out;
}

// ---- single allocation -----------------------------------------------------

AllocationRecord allocate_pair(const EfopaModel& model, const std::string& method, double h1, double h2, double p_max,
                               const RateSetup& rates) {
    AllocationRecord rec{method, h1, h2, p_max};
    if (method == "oma") {
        const OmaAllocation oma = oma_allocate(p_max, 2);
        rec.p1 = rec.p2 = oma.slot_power;
        rec.rate1 = rate_oma({h1, rates.bandwidth}, oma.slot_power, oma.user_count, rates.noise);
        rec.rate2 = rate_oma({h2, rates.bandwidth}, oma.slot_power, oma.user_count, rates.noise);
        rec.sum_rate = rec.rate1 + rec.rate2;
        const std::array<double, 2> r{rec.rate1, rec.rate2};
        rec.fairness = jain_index(r);
        return rec;
    }

    AllocationVector alloc;
    if (method == "efopa") {
        alloc = efopa_allocate(model, h1, h2, p_max);
    } else if (method == "grpa") {
        alloc = grpa_allocate(h1, h2, p_max);
    } else if (method == "ngdpa") {
        alloc = ngdpa_allocate(h1, h2, p_max);
    } else {
        throw PreconditionError("unknown method '" + method + "' (expected efopa, grpa, ngdpa or oma)");
    }
    const std::array<UserLink, 2> links{{{h1, rates.bandwidth}, {h2, rates.bandwidth}}};
    const RateReport report = evaluate(links, alloc, rates.noise, rates.model);
    rec.p1 = alloc.powers[0];
    rec.p2 = alloc.powers[1];
    rec.rate1 = report.per_user_rates[0];
    rec.rate2 = report.per_user_rates[1];
    rec.sum_rate = report.sum_rate;
    rec.fairness = report.fairness;
    return rec;
}

std::string allocation_csv_header() {
    return csv_line({"method", "h1", "h2", "p_max", "p1", "p2", "rate1_bps", "rate2_bps", "sum_rate_bps", "fairness"});
}

std::string allocation_csv_row(const AllocationRecord& rec) {
    return csv_line({rec.method, format_sci(rec.h1), format_sci(rec.h2), format_sci(rec.p_max), format_sci(rec.p1),
                     format_sci(rec.p2), format_sci(rec.rate1), format_sci(rec.rate2), format_sci(rec.sum_rate),
                     format_sci(rec.fairness)});
}

// ---- sweep -----------------------------------------------------------------

std::vector<SweepRow> sweep_rows(const EfopaModel& model, const RunConfig& config, double h1) {
    std::vector<SweepRow> rows;
    const RateSetup rates = rate_setup(config);
    for (double r : config.sweep.ratios()) {
        for (const auto& method : config.sweep.methods) {
            rows.push_back({r, allocate_pair(model, method, h1, r * h1, config.p_max, rates)});
        }
    }
    return rows;
}

std::string cmd_sweep(const EfopaModel& model, const RunConfig& config) {
    const double h1 = config.sweep.h1.resolve(config.sweep.h1.relative_to_h0 ? reference_h0(config) : 0.0);
    Provenance prov = provenance("sweep", config);
    prov.extra = {{"h1", format_sci(h1)},
                  {"rate_model", rate_model_name(config)},
                  {"mu_mode", std::string(to_string(model.mu_mode))}};
    std::string file = provenance_header(prov);
    file += csv_line({"r", "method", "h1", "h2", "p1", "p2", "rate1_bps", "rate2_bps", "sum_rate_bps", "fairness"});
    for (const auto& row : sweep_rows(model, config, h1)) {
        const auto& rec = row.record;
        file += csv_line({format_sci(row.r), rec.method, format_sci(rec.h1), format_sci(rec.h2), format_sci(rec.p1),
                          format_sci(rec.p2), format_sci(rec.rate1), format_sci(rec.rate2), format_sci(rec.sum_rate),
                          format_sci(rec.fairness)});
    }
    return file;
}

// ---- pairwise statistics ---------------------------------------------------

namespace {

// Pair k enumerates (strong j, weak i) with i <= j, j-major: k = j (j + 1) / 2 + i.
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t k) {
    auto j = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
    while (j * (j + 1) / 2 > k) --j;
    while ((j + 1) * (j + 2) / 2 <= k) ++j;
    return {static_cast<std::size_t>(j), static_cast<std::size_t>(k - j * (j + 1) / 2)};
}

std::vector<std::uint64_t> sample_pairs(std::uint64_t total, std::uint64_t wanted, std::uint64_t seed) {
    // Floyd's algorithm: `wanted` distinct indices from [0, total).
    Rng rng(seed, 0x9a125ULL);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(wanted * 2));
    for (std::uint64_t j = total - wanted; j < total; ++j) {
        const std::uint64_t t = rng.index(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

PairStats cmd_pairs_stats(const EfopaModel& model, const std::vector<double>& gains, const RunConfig& config) {
    if (gains.empty()) throw PreconditionError("pairs: empty channel list");
    std::vector<double> sorted = gains;
    std::sort(sorted.begin(), sorted.end());

    PairStats stats;
    const std::uint64_t n = sorted.size();
    stats.total_pairs = n * (n + 1) / 2;

    std::vector<std::uint64_t> subset;
    const bool sampled = config.pairs_subsample > 0 && config.pairs_subsample < stats.total_pairs;
    if (sampled) subset = sample_pairs(stats.total_pairs, config.pairs_subsample, config.seed);
    stats.evaluated_pairs = sampled ? subset.size() : stats.total_pairs;

    static const std::array<std::string, 3> kBaselines{"grpa", "ngdpa", "oma"};
    std::array<std::uint64_t, 3> wins{}, wins_or_ties{}, fair_wins{};
    const RateSetup rates = rate_setup(config);

    auto visit = [&](std::size_t j, std::size_t i) {
        const double h1 = sorted[j];
        const double h2 = sorted[i];
        const AllocationRecord ours = allocate_pair(model, "efopa", h1, h2, config.p_max, rates);
        for (std::size_t b = 0; b < kBaselines.size(); ++b) {
            const AllocationRecord theirs = allocate_pair(model, kBaselines[b], h1, h2, config.p_max, rates);
            if (ours.sum_rate > theirs.sum_rate) ++wins[b];
            if (ours.sum_rate >= theirs.sum_rate * (1.0 - 1e-3)) ++wins_or_ties[b];
            if (ours.fairness > theirs.fairness) ++fair_wins[b];
        }
    };
    if (sampled) {
        for (std::uint64_t k : subset) {
            const auto [j, i] = pair_from_index(k);
            visit(j, i);
        }
    } else {
        for (std::size_t j = 0; j < sorted.size(); ++j) {
            for (std::size_t i = 0; i <= j; ++i) visit(j, i);
        }
    }

    const double denom = static_cast<double>(stats.evaluated_pairs);
    for (std::size_t b = 0; b < kBaselines.size(); ++b) {
        stats.comparisons.push_back({kBaselines[b], stats.evaluated_pairs, 100.0 * static_cast<double>(wins[b]) / denom,
                                     100.0 * static_cast<double>(wins_or_ties[b]) / denom,
                                     100.0 * static_cast<double>(fair_wins[b]) / denom});
    }

    Provenance prov = provenance("pairs", config);
    prov.extra = {{"channels", std::to_string(n)},
                  {"total_pairs", std::to_string(stats.total_pairs)},
                  {"evaluated_pairs", std::to_string(stats.evaluated_pairs)},
                  {"rate_model", rate_model_name(config)},
                  {"mu_mode", std::string(to_string(model.mu_mode))}};
    stats.file = provenance_header(prov);
    stats.file += csv_line({"baseline", "pairs", "sum_rate_win_pct", "sum_rate_win_or_tie_pct", "fairness_win_pct"});
    for (const auto& c : stats.comparisons) {
        stats.file += csv_line({c.baseline, std::to_string(c.pairs), format_sci(c.sum_rate_win_pct),
                                format_sci(c.sum_rate_win_or_tie_pct), format_sci(c.fairness_win_pct)});
    }
    return stats;
}

// ---- walking scenario ------------------------------------------------------

std::vector<WalkRow> walk_rows(const EfopaModel& model, const RunConfig& config) {
    const double fixed_gain =
        config.walk_h1.value_or(channel_gain(geometry_from_positions(config.tx, config.walk_fixed_rx), config.optics));
    const RateSetup rates = rate_setup(config);

    std::vector<WalkRow> rows;
    for (const auto& wp : config.waypoints) {
        const double h2 = channel_gain(geometry_from_positions(config.tx, wp.position), config.optics);
        for (const auto& method : config.walk_methods) {
            WalkRow row;
            row.waypoint = wp.label;
            row.position = wp.position;
            row.method = method;
            row.h1 = fixed_gain;
            row.h2 = h2;
            if (h2 <= 0.0) {
                row.flag = "out_of_fov";
                rows.push_back(std::move(row));
                continue;
            }
            double strong = fixed_gain;
            double weak = h2;
            if (weak > strong) {
                std::swap(strong, weak);
                row.flag = "swapped";
            }
            row.r = weak / strong;
            row.mu = efopa_mu(model, strong, config.p_max);
            row.record = allocate_pair(model, method, strong, weak, config.p_max, rates);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string cmd_walk(const EfopaModel& model, const RunConfig& config) {
    const auto rows = walk_rows(model, config);
    Provenance prov = provenance("walk", config);
    prov.extra = {{"rate_model", rate_model_name(config)}, {"mu_mode", std::string(to_string(model.mu_mode))}};
    std::string file = provenance_header(prov);
    file += csv_line({"waypoint", "x", "y", "z", "method", "h1", "h2", "r", "mu", "p1", "p2", "rate1_bps", "rate2_bps",
                      "sum_rate_bps", "fairness", "flag"});
    for (const auto& row : rows) {
        std::vector<std::string> cells{row.waypoint,         format_sci(row.position.x), format_sci(row.position.y),
                                       format_sci(row.position.z), row.method,          format_sci(row.h1),
                                       format_sci(row.h2)};
        if (row.flag == "out_of_fov") {
            cells.insert(cells.end(), 8, "");
        } else {
            const auto& rec = row.record;
            for (double v : {row.r, row.mu, rec.p1, rec.p2, rec.rate1, rec.rate2, rec.sum_rate, rec.fairness}) {
                cells.push_back(format_sci(v));
            }
        }
        cells.push_back(row.flag);
        file += csv_line(cells);
    }
    return file;
}

// ---- command line ----------------------------------------------------------

namespace {

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fair two-user NOMA power allocation for VLC: channel enumeration, curve derivation and benchmarks",
                 "efopa"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path;
    std::string model_path;
    std::string out_path;
    std::string dataset_path;
    std::string channels_path;
    std::string method;
    std::string rate_model;
    std::string mu_mode;
    std::string h1_text;
    double h1 = 0.0;
    double h2 = 0.0;
    std::optional<double> p_max;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> subsample;

    auto add_rate_mu = [&](CLI::App* cmd) {
        cmd->add_option("--rate-model", rate_model, "lower-bound | shannon | interference-dominant")
            ->check(CLI::IsMember({"lower-bound", "shannon", "interference-dominant"}));
        cmd->add_option("--mu-mode", mu_mode, "transfer | direct")->check(CLI::IsMember({"transfer", "direct"}));
    };

    auto* channels = app.add_subcommand("channels", "Enumerate the unique LoS channel gains of the grid");
    channels->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    channels->add_option("--out", out_path, "Output CSV (default: stdout)");

    auto* derive = app.add_subcommand("derive", "Build the (r, p1) dataset with ABC and fit the allocation curve");
    derive->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    derive->add_option("--seed", seed, "Master PRNG seed (overrides the config)");
    derive->add_option("--h1", h1_text, "Strong-user gain, absolute or as a multiple of h0 (e.g. 2h0)");
    derive->add_option("--p-max", p_max, "Total power [W]");
    derive->add_option("--out", out_path, "Model file")->required();
    derive->add_option("--dataset", dataset_path, "Dataset CSV");

    auto* allocate = app.add_subcommand("allocate", "Allocate power for one user pair and report rates");
    allocate->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    allocate->add_option("--model", model_path, "Model file or 'published'")->default_val("published");
    allocate->add_option("--method", method, "efopa | grpa | ngdpa | oma")->required();
    allocate->add_option("--h1", h1, "Strong-user gain")->required();
    allocate->add_option("--h2", h2, "Weak-user gain")->required();
    allocate->add_option("--p-max", p_max, "Total power [W]");
    allocate->add_option("--out", out_path, "Output CSV (default: stdout)");
    add_rate_mu(allocate);

    auto* sweep = app.add_subcommand("sweep", "Sweep r = h2/h1 for every method");
    sweep->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    sweep->add_option("--model", model_path, "Model file or 'published'")->required();
    sweep->add_option("--seed", seed, "Seed recorded in the provenance header");
    sweep->add_option("--out", out_path, "Output CSV (default: stdout)");
    add_rate_mu(sweep);

    auto* pairs = app.add_subcommand("pairs", "Win percentages of EFOPA over every channel pair");
    pairs->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    pairs->add_option("--model", model_path, "Model file or 'published'")->required();
    pairs->add_option("--channels", channels_path, "Channels CSV from `efopa channels`")->required()->check(CLI::ExistingFile);
    pairs->add_option("--seed", seed, "Seed for subsampling");
    pairs->add_option("--subsample", subsample, "Evaluate this many random pairs (0: all)");
    pairs->add_option("--out", out_path, "Output CSV (default: stdout)");
    add_rate_mu(pairs);

    auto* walk = app.add_subcommand("walk", "Fixed receiver plus a walking user: per-waypoint allocation");
    walk->add_option("--config", config_path, "Run configuration")->check(CLI::ExistingFile);
    walk->add_option("--model", model_path, "Model file or 'published'")->required();
    walk->add_option("--out", out_path, "Output CSV (default: stdout)");
    add_rate_mu(walk);

    std::vector<std::string> argv_store = args;
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        RunConfig config = config_path.empty() ? default_config() : load_config(config_path);
        if (seed) {
            config.seed = *seed;
            config.abc.seed = *seed;
        }
        if (subsample) config.pairs_subsample = *subsample;
        if (!rate_model.empty()) config.rate_model = parse_rate_model(rate_model);
        auto model_for = [&] {
            EfopaModel m = load_model(model_path);
            if (!mu_mode.empty()) m.mu_mode = parse_mu_mode(mu_mode);
            return m;
        };

        if (*channels) {
            emit(out_path, cmd_channels(config).file, out);
        } else if (*derive) {
            const GainSpec spec = h1_text.empty() ? config.derive_h1 : GainSpec::parse(h1_text);
            const double h1_value = spec.resolve(spec.relative_to_h0 ? reference_h0(config) : 0.0);
            const DeriveOutput result = cmd_derive(config, h1_value, p_max.value_or(config.p_max));
            write_file_atomic(out_path, result.model_file);
            if (!dataset_path.empty()) write_file_atomic(dataset_path, result.dataset_file);
        } else if (*allocate) {
            const AllocationRecord rec = allocate_pair(model_for(), method, h1, h2, p_max.value_or(config.p_max),
                                                       {config.bandwidth, config.noise(), config.rate_model});
            emit(out_path, allocation_csv_header() + allocation_csv_row(rec), out);
        } else if (*sweep) {
            emit(out_path, cmd_sweep(model_for(), config), out);
        } else if (*pairs) {
            emit(out_path, cmd_pairs_stats(model_for(), parse_channel_gains(read_file(channels_path)), config).file, out);
        } else if (*walk) {
            emit(out_path, cmd_walk(model_for(), config), out);
        }
    } catch (const std::exception& e) {
        err << "efopa: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace efopa
