#pragma once

// Text artifacts: CSV tables with a provenance header, the channel list and the
// flat model file. Numbers are written with std::to_chars, so output does not
// depend on the process locale.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efopa/allocators.hpp"

namespace efopa {

inline constexpr std::string_view kToolName = "efopa";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Scientific notation with 9 significant digits, e.g. 2.37410267e+08.
std::string format_sci(double v);
/// Shortest representation that round-trips.
std::string format_exact(double v);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string fnv1a_hex(std::string_view bytes);

struct Provenance {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> extra;  ///< additional "# key: value" lines
};

/// "# tool: efopa 1.0.0", "# command: ...", "# config_digest: ...", "# seed: ...", extras.
std::string provenance_header(const Provenance& prov);

std::string csv_line(const std::vector<std::string>& cells);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Gains from a channels file: skips '#' lines and the header row, reads the `gain` column.
std::vector<double> parse_channel_gains(std::string_view text);

/// Metadata that travels with a model file (grid, seed, fit diagnostics...).
using ModelMetadata = std::vector<std::pair<std::string, std::string>>;

std::string serialize_model(const EfopaModel& model, const ModelMetadata& metadata);
/// Reads a model file. Unknown keys are returned through `metadata` when non-null.
EfopaModel parse_model(std::string_view text, std::map<std::string, std::string>* metadata = nullptr);
/// "published" selects the published curve; anything else is a path.
EfopaModel load_model(const std::string& path_or_builtin);

}  // namespace efopa
