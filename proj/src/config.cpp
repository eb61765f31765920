#include "efopa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "efopa/error.hpp"
#include "efopa/table_io.hpp"

namespace efopa {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

bool parse_number(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

// Typed access to the merged key/value map with line-aware diagnostics.
class Fields {
public:
    explicit Fields(std::map<std::string, KeyValue> values) : values_(std::move(values)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        const auto it = values_.find(key);
        const std::string where = (it != values_.end() && it->second.line > 0)
                                      ? "config line " + std::to_string(it->second.line)
                                      : std::string("config");
        throw ConfigError(where + ": field '" + key + "': " + why);
    }

    const std::string& text(const std::string& key) const { return values_.at(key).value; }

    double number(const std::string& key) const {
        double v = 0.0;
        if (!parse_number(text(key), v)) fail(key, "expected a number, got '" + text(key) + "'");
        return v;
    }

    double positive(const std::string& key) const {
        const double v = number(key);
        if (!(v > 0.0)) fail(key, "must be > 0");
        return v;
    }

    std::optional<double> auto_or_positive(const std::string& key) const {
        if (text(key) == "auto") return std::nullopt;
        return positive(key);
    }

    std::size_t count(const std::string& key, std::size_t min) const {
        const double v = number(key);
        if (v < static_cast<double>(min) || v != std::floor(v) || v > 1e15) {
            fail(key, "must be an integer >= " + std::to_string(min));
        }
        return static_cast<std::size_t>(v);
    }

    bool flag(const std::string& key) const {
        if (text(key) == "true") return true;
        if (text(key) == "false") return false;
        fail(key, "expected true or false");
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        if (text(key).empty()) return out;
        for (const auto& part : split(text(key), ',')) {
            double v = 0.0;
            if (!parse_number(part, v)) fail(key, "expected a comma-separated list of numbers");
            out.push_back(v);
        }
        return out;
    }

    Position position(const std::string& key) const { return position_from(key, text(key)); }

    Position position_from(const std::string& key, const std::string& value) const {
        std::vector<double> xyz;
        for (const auto& part : split(value, ',')) {
            double v = 0.0;
            if (!parse_number(part, v)) fail(key, "expected x, y, z");
            xyz.push_back(v);
        }
        if (xyz.size() != 3) fail(key, "expected exactly three coordinates");
        return {xyz[0], xyz[1], xyz[2]};
    }

    template <typename Parser>
    auto parsed(const std::string& key, Parser parser) const {
        try {
            return parser(text(key));
        } catch (const PreconditionError& e) {
            fail(key, e.what());
        }
    }

private:
    std::map<std::string, KeyValue> values_;
};

std::vector<std::string> method_list(const Fields& f, const std::string& key) {
    std::vector<std::string> methods = split(f.text(key), ',');
    for (const auto& m : methods) {
        if (m != "efopa" && m != "grpa" && m != "ngdpa" && m != "oma") f.fail(key, "unknown method '" + m + "'");
    }
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    return methods;
}

// Inclusive arithmetic range lo, lo + step, ... <= hi.
std::vector<double> inclusive_range(double lo, double hi, double step) {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
    return out;
}

bool inside_room(const Position& p, const RunConfig& c) {
    return p.x >= 0.0 && p.x <= c.room_length && p.y >= 0.0 && p.y <= c.room_width && p.z >= 0.0 &&
           p.z <= c.room_height;
}

}  // namespace

std::string GainSpec::to_string() const {
    return relative_to_h0 ? format_exact(value) + "h0" : format_exact(value);
}

GainSpec GainSpec::parse(std::string_view text) {
    std::string t = trim(text);
    GainSpec spec;
    if (t.size() >= 2 && t.compare(t.size() - 2, 2, "h0") == 0) {
        spec.relative_to_h0 = true;
        t = trim(std::string_view(t).substr(0, t.size() - 2));
        if (!t.empty() && t.back() == '*') t = trim(std::string_view(t).substr(0, t.size() - 1));
        if (t.empty()) t = "1";
    }
    if (!parse_number(t, spec.value) || !(spec.value > 0.0)) {
        throw PreconditionError("expected a positive gain or a multiple of h0 (e.g. 2h0)");
    }
    return spec;
}

std::vector<double> SweepSpec::ratios() const { return inclusive_range(r_min, r_max, r_step); }

const std::map<std::string, std::string>& config_defaults() {
    static const std::map<std::string, std::string> defaults{
        {"room.length_m", "6"},
        {"room.width_m", "6"},
        {"room.height_m", "3"},
        {"room.tx", "3, 3, 3"},
        {"optics.pd_area_m2", "1e-4"},
        {"optics.refractive_index", "1.5"},
        {"optics.filter_gain", "1"},
        {"optics.fov_deg", "60"},
        {"optics.semi_angle_deg", "60"},
        {"noma.p_max_w", "22.5"},
        {"noma.bandwidth_hz", "30e6"},
        {"noma.noise_variance_w", "3e-12"},
        {"noma.rate_model", "shannon"},
        {"grid.distance_step_m", "0.25"},
        {"grid.distance_max_m", "auto"},
        {"grid.append_max_distance", "true"},
        {"grid.distances_m", ""},
        {"grid.angle_min_deg", "5"},
        {"grid.angle_max_deg", "60"},
        {"grid.angle_step_deg", "5"},
        {"grid.angles_deg", ""},
        {"grid.dedup_tolerance", "1e-9"},
        {"abc.food_count", "10"},
        {"abc.max_evaluations", "4000"},
        {"abc.limit", "10"},
        {"seed", "1"},
        {"efopa.h0", "auto"},
        {"efopa.h1", "2h0"},
        {"efopa.mu_mode", "transfer"},
        {"efopa.clamp_floor_w", "0"},
        {"efopa.swap_stronger", "false"},
        {"efopa.objective_rate_model", "lower-bound"},
        {"sweep.r_min", "0.01"},
        {"sweep.r_max", "1"},
        {"sweep.r_step", "0.01"},
        {"sweep.h1", "2h0"},
        {"sweep.methods", "efopa, grpa, ngdpa, oma"},
        {"pairs.subsample", "0"},
        {"walk.fixed_rx", "3, 3, 1"},
        {"walk.h1", "auto"},
        {"walk.waypoints", "a: 2.5, 1.5, 1.7; b: 2, 2.5, 1.7; c: 4.5, 4, 1.7"},
        {"walk.methods", "efopa, grpa, ngdpa, oma"},
    };
    return defaults;
}

std::map<std::string, KeyValue> parse_key_values(std::string_view text, std::string_view what) {
    std::map<std::string, KeyValue> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        const std::string where = std::string(what) + " line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (out.count(key)) throw ConfigError(where + ": field '" + key + "' given twice");
        out[key] = {trim(std::string_view(t).substr(eq + 1)), lineno};
    }
    return out;
}

RunConfig parse_config(std::string_view text) {
    auto given = parse_key_values(text, "config");
    std::map<std::string, KeyValue> merged;
    for (const auto& [k, v] : config_defaults()) merged[k] = {v, 0};
    for (auto& [k, v] : given) {
        if (!merged.count(k)) throw ConfigError("config line " + std::to_string(v.line) + ": unknown field '" + k + "'");
        merged[k] = v;
    }

    RunConfig c;
    for (const auto& [k, v] : merged) c.canonical += k + " = " + v.value + "\n";
    c.digest = fnv1a_hex(c.canonical);

    const Fields f(std::move(merged));

    c.room_length = f.positive("room.length_m");
    c.room_width = f.positive("room.width_m");
    c.room_height = f.positive("room.height_m");
    c.tx = f.position("room.tx");
    if (!inside_room(c.tx, c) || !(c.tx.z > 0.0)) f.fail("room.tx", "transmitter must be inside the room");

    c.optics.pd_area = f.positive("optics.pd_area_m2");
    c.optics.refractive_index = f.number("optics.refractive_index");
    if (!(c.optics.refractive_index >= 1.0)) f.fail("optics.refractive_index", "must be >= 1");
    c.optics.filter_gain = f.positive("optics.filter_gain");
    const double fov = f.number("optics.fov_deg");
    if (!(fov > 0.0 && fov <= 90.0)) f.fail("optics.fov_deg", "must lie in (0, 90]");
    c.optics.fov = deg_to_rad(fov);
    const double semi = f.number("optics.semi_angle_deg");
    if (!(semi > 0.0 && semi < 90.0)) f.fail("optics.semi_angle_deg", "must lie in (0, 90)");
    c.optics.semi_angle = deg_to_rad(semi);

    c.p_max = f.positive("noma.p_max_w");
    c.bandwidth = f.positive("noma.bandwidth_hz");
    c.noise_variance = f.positive("noma.noise_variance_w");
    c.rate_model = f.parsed("noma.rate_model", parse_rate_model);

    // Channel grid.
    std::vector<double> distances = f.numbers("grid.distances_m");
    if (distances.empty()) {
        const double step = f.positive("grid.distance_step_m");
        double dmax = 0.0;
        if (auto fixed = f.auto_or_positive("grid.distance_max_m")) {
            dmax = *fixed;
        } else {
            for (double x : {0.0, c.room_length}) {
                for (double y : {0.0, c.room_width}) {
                    dmax = std::max(dmax, std::hypot(c.tx.x - x, c.tx.y - y, c.tx.z));
                }
            }
        }
        distances = inclusive_range(step, dmax, step);
        if (f.flag("grid.append_max_distance") && (distances.empty() || distances.back() < dmax * (1.0 - 1e-12))) {
            distances.push_back(dmax);
        }
    }
    for (double d : distances) {
        if (!(d > 0.0)) f.fail("grid.distances_m", "distances must be > 0");
    }
    std::vector<double> angles_deg = f.numbers("grid.angles_deg");
    if (angles_deg.empty()) {
        angles_deg = inclusive_range(f.positive("grid.angle_min_deg"), f.positive("grid.angle_max_deg"),
                                     f.positive("grid.angle_step_deg"));
    }
    for (double a : angles_deg) {
        if (!(a > 0.0 && a <= fov + 1e-12)) f.fail("grid.angles_deg", "angles must lie in (0, fov]");
        c.grid.angles.push_back(std::min(deg_to_rad(a), c.optics.fov));
    }
    c.grid.distances = distances;
    c.grid.dedup_tolerance = f.number("grid.dedup_tolerance");
    if (!(c.grid.dedup_tolerance >= 0.0)) f.fail("grid.dedup_tolerance", "must be >= 0");
    if (c.grid.distances.empty()) f.fail("grid.distances_m", "grid has no distances");
    if (c.grid.angles.empty()) f.fail("grid.angles_deg", "grid has no angles");
    c.grid_description = std::to_string(c.grid.distances.size()) + " distances [" + format_sci(c.grid.distances.front()) +
                         ", " + format_sci(c.grid.distances.back()) + "] m x " + std::to_string(angles_deg.size()) +
                         " angles [" + format_exact(angles_deg.front()) + ", " + format_exact(angles_deg.back()) +
                         "] deg, dedup " + format_exact(c.grid.dedup_tolerance);

    c.abc.food_count = f.count("abc.food_count", 2);
    c.abc.max_evaluations = f.count("abc.max_evaluations", 1);
    if (c.abc.max_evaluations < c.abc.food_count) f.fail("abc.max_evaluations", "must be >= abc.food_count");
    c.abc.limit = f.count("abc.limit", 1);
    c.seed = static_cast<std::uint64_t>(f.count("seed", 0));
    c.abc.seed = c.seed;

    c.h0 = f.auto_or_positive("efopa.h0");
    c.derive_h1 = f.parsed("efopa.h1", GainSpec::parse);
    c.mu_mode = f.parsed("efopa.mu_mode", parse_mu_mode);
    c.clamp_floor = f.number("efopa.clamp_floor_w");
    if (!(c.clamp_floor >= 0.0)) f.fail("efopa.clamp_floor_w", "must be >= 0");
    c.swap_stronger = f.flag("efopa.swap_stronger");
    c.objective_model = f.parsed("efopa.objective_rate_model", parse_rate_model);

    c.sweep.r_min = f.positive("sweep.r_min");
    c.sweep.r_max = f.positive("sweep.r_max");
    c.sweep.r_step = f.positive("sweep.r_step");
    if (c.sweep.r_min > c.sweep.r_max || c.sweep.r_max > 1.0) f.fail("sweep.r_max", "need 0 < r_min <= r_max <= 1");
    c.sweep.h1 = f.parsed("sweep.h1", GainSpec::parse);
    c.sweep.methods = method_list(f, "sweep.methods");

    c.pairs_subsample = f.count("pairs.subsample", 0);

    c.walk_fixed_rx = f.position("walk.fixed_rx");
    if (!inside_room(c.walk_fixed_rx, c)) f.fail("walk.fixed_rx", "receiver must be inside the room");
    c.walk_h1 = f.auto_or_positive("walk.h1");
    for (const auto& item : split(f.text("walk.waypoints"), ';')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) f.fail("walk.waypoints", "expected 'label: x, y, z' entries separated by ';'");
        Waypoint wp{trim(std::string_view(item).substr(0, colon)),
                    f.position_from("walk.waypoints", item.substr(colon + 1))};
        if (!inside_room(wp.position, c)) f.fail("walk.waypoints", "waypoint '" + wp.label + "' is outside the room");
        c.waypoints.push_back(std::move(wp));
    }
    c.walk_methods = method_list(f, "walk.methods");
    return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

RunConfig default_config() { return parse_config(""); }

}  // namespace efopa
