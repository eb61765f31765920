#include "efopa/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "efopa/config.hpp"
#include "efopa/error.hpp"

namespace efopa {

std::string format_sci(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 8);
    return std::string(buf, res.ptr);
}

std::string format_exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a_hex(std::string_view bytes) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    return out;
}

std::string provenance_header(const Provenance& prov) {
    std::ostringstream os;
    os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
    os << "# command: " << prov.command << '\n';
    os << "# config_digest: " << prov.config_digest << '\n';
    os << "# seed: " << prov.seed << '\n';
    for (const auto& [k, v] : prov.extra) os << "# " << k << ": " << v << '\n';
    return os.str();
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

double to_double(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ConfigError(what + ": not a number: '" + std::string(text) + "'");
    return v;
}

}  // namespace

std::vector<double> parse_channel_gains(std::string_view text) {
    std::vector<double> gains;
    std::istringstream in{std::string(text)};
    std::string line;
    int column = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (column < 0) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] == "gain") column = static_cast<int>(i);
            }
            if (column < 0) throw ConfigError("channels file: header row has no 'gain' column");
            continue;
        }
        if (static_cast<std::size_t>(column) >= cells.size()) {
            throw ConfigError("channels file line " + std::to_string(lineno) + ": missing gain");
        }
        gains.push_back(to_double(cells[static_cast<std::size_t>(column)], "channels file line " + std::to_string(lineno)));
    }
    if (gains.empty()) throw ConfigError("channels file: no gains");
    return gains;
}

std::string serialize_model(const EfopaModel& model, const ModelMetadata& metadata) {
    std::ostringstream os;
    os << "# " << kToolName << " model " << kToolVersion << '\n';
    os << "a = " << format_exact(model.coefficients.a) << '\n';
    os << "b = " << format_exact(model.coefficients.b) << '\n';
    os << "c = " << format_exact(model.coefficients.c) << '\n';
    os << "d = " << format_exact(model.coefficients.d) << '\n';
    os << "h_ref = " << format_exact(model.h_ref) << '\n';
    os << "p_ref = " << format_exact(model.p_ref) << '\n';
    os << "h0 = " << format_exact(model.h0) << '\n';
    os << "mu_mode = " << to_string(model.mu_mode) << '\n';
    os << "clamp_floor = " << format_exact(model.clamp_floor) << '\n';
    for (const auto& [k, v] : metadata) os << k << " = " << v << '\n';
    return os.str();
}

EfopaModel parse_model(std::string_view text, std::map<std::string, std::string>* metadata) {
    auto kv = parse_key_values(text, "model");
    auto take = [&](const char* key) -> double {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(std::string("model: missing field '") + key + "'");
        const double v = to_double(it->second.value, "model line " + std::to_string(it->second.line) + ": field '" + key + "'");
        kv.erase(it);
        return v;
    };
    EfopaModel model;
    model.coefficients = {take("a"), take("b"), take("c"), take("d")};
    model.h_ref = take("h_ref");
    model.p_ref = take("p_ref");
    model.h0 = take("h0");
    model.clamp_floor = take("clamp_floor");
    auto mode = kv.find("mu_mode");
    if (mode == kv.end()) throw ConfigError("model: missing field 'mu_mode'");
    try {
        model.mu_mode = parse_mu_mode(mode->second.value);
    } catch (const PreconditionError& e) {
        throw ConfigError("model line " + std::to_string(mode->second.line) + ": " + e.what());
    }
    kv.erase(mode);
    try {
        model.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError(e.what());
    }
    if (metadata) {
        for (auto& [k, v] : kv) (*metadata)[k] = v.value;
    }
    return model;
}

EfopaModel load_model(const std::string& path_or_builtin) {
    if (path_or_builtin == "published") return EfopaModel::published();
    return parse_model(read_file(path_or_builtin));
}

}  // namespace efopa
