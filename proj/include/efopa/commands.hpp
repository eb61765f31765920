#pragma once

// The experiment pipeline behind the `efopa` command-line tool. Every command is a
// pure function from inputs to the exact text it writes, so determinism can be
// checked without touching the filesystem.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "efopa/allocators.hpp"
#include "efopa/config.hpp"
#include "efopa/curve_fit.hpp"
#include "efopa/noma_rates.hpp"
#include "efopa/vlc_channel.hpp"

namespace efopa {

/// Reference mean gain: the configured efopa.h0, else the enumerated mean.
double reference_h0(const RunConfig& config);

// ---- channels --------------------------------------------------------------

struct ChannelsOutput {
    ChannelSet channels;
    std::string file;
};
ChannelsOutput cmd_channels(const RunConfig& config);

// ---- derive ----------------------------------------------------------------

struct DeriveOutput {
    double h0 = 0.0;
    double h1 = 0.0;
    ChannelSet channels;
    std::vector<DatasetPoint> dataset;
    FitResult fit;
    EfopaModel model;
    std::string model_file;
    std::string dataset_file;
};

/// Enumerate channels, optimize p1 per channel with ABC, fit the two-term curve.
/// `h1` and `p_max` default to efopa.h1 and noma.p_max_w.
DeriveOutput cmd_derive(const RunConfig& config);
DeriveOutput cmd_derive(const RunConfig& config, double h1, double p_max);

// ---- single allocation -----------------------------------------------------

struct AllocationRecord {
    std::string method;
    double h1 = 0.0;
    double h2 = 0.0;
    double p_max = 0.0;
    double p1 = 0.0;  ///< strong user; OMA: slot power
    double p2 = 0.0;
    double rate1 = 0.0;
    double rate2 = 0.0;
    double sum_rate = 0.0;
    double fairness = 0.0;
};

struct RateSetup {
    double bandwidth = 30e6;
    NoiseModel noise;
    RateModel model = RateModel::Shannon;
};

/// `method` is one of efopa, grpa, ngdpa, oma. OMA rates always use the orthogonal
/// Shannon expression with a 1/2 time share.
AllocationRecord allocate_pair(const EfopaModel& model, const std::string& method, double h1, double h2, double p_max,
                               const RateSetup& rates);

std::string allocation_csv_header();
std::string allocation_csv_row(const AllocationRecord& rec);

// ---- sweep -----------------------------------------------------------------

struct SweepRow {
    double r = 0.0;
    AllocationRecord record;
};

/// Rows ordered by ascending r, then by the configured method order.
std::vector<SweepRow> sweep_rows(const EfopaModel& model, const RunConfig& config, double h1);
std::string cmd_sweep(const EfopaModel& model, const RunConfig& config);

// ---- pairwise statistics ---------------------------------------------------

struct BaselineComparison {
    std::string baseline;
    std::uint64_t pairs = 0;
    double sum_rate_win_pct = 0.0;         ///< EFOPA sum rate strictly higher
    double sum_rate_win_or_tie_pct = 0.0;  ///< EFOPA within 0.1 % of or above the baseline
    double fairness_win_pct = 0.0;         ///< EFOPA Jain index strictly higher
};

struct PairStats {
    std::uint64_t total_pairs = 0;
    std::uint64_t evaluated_pairs = 0;
    std::vector<BaselineComparison> comparisons;  ///< grpa, ngdpa, oma
    std::string file;
};

/// Every (h1, h2) with h2 <= h1 from `gains`, optionally subsampled without replacement
/// (pairs.subsample, seeded by `seed`).
PairStats cmd_pairs_stats(const EfopaModel& model, const std::vector<double>& gains, const RunConfig& config);

// ---- walking scenario ------------------------------------------------------

struct WalkRow {
    std::string waypoint;
    Position position;
    std::string method;
    double h1 = 0.0;
    double h2 = 0.0;
    double r = 0.0;
    double mu = 0.0;
    AllocationRecord record;
    std::string flag;  ///< empty, "out_of_fov" or "swapped"
};

std::vector<WalkRow> walk_rows(const EfopaModel& model, const RunConfig& config);
std::string cmd_walk(const EfopaModel& model, const RunConfig& config);

// ---- command line ----------------------------------------------------------

/// Full CLI entry point (argv[0] included). Returns the process exit code and prints a
/// one-line diagnostic on failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace efopa
