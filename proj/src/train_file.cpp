#include "uwqkd/train_file.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "uwqkd/errors.hpp"

namespace uwqkd::io {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Section {
    std::string kind;
    int line = 0;
    std::map<std::string, std::pair<double, int>> values;  // canonical key -> (value, line)
};

// Maps a raw key to its canonical name, converting degrees to radians.
std::pair<std::string, double> canonical(const std::string& key, double v) {
    constexpr double deg = std::numbers::pi / 180.0;
    for (const char* angle : {"theta", "delta", "phi"}) {
        const std::string a = angle;
        if (key == a || key == a + "_rad") return {a, v};
        if (key == a + "_deg") return {a, v * deg};
    }
    return {key, v};
}

double take(Section& s, const std::string& key, std::optional<double> fallback = {}) {
    const auto it = s.values.find(key);
    if (it == s.values.end()) {
        if (fallback) return *fallback;
        throw ConfigError("[" + s.kind + "] is missing '" + key + "'", s.line);
    }
    const double v = it->second.first;
    s.values.erase(it);
    return v;
}

optics::MuellerMatrix build(Section s) {
    optics::MuellerMatrix m;
    try {
        if (s.kind == "polarizer") {
            const double eps = take(s, "epsilon");
            m = optics::polarizer_matrix({eps, take(s, "theta", 0.0)});
        } else if (s.kind == "waveplate") {
            const double delta = take(s, "delta");
            m = optics::waveplate_matrix({delta, take(s, "theta", 0.0)});
        } else if (s.kind == "bs_t") {
            optics::BeamSplitterSpec bs{};
            bs.tp = take(s, "tp");
            bs.ts = take(s, "ts");
            bs.rp = bs.rs = 0.0;
            bs.phi_t = take(s, "phi", 0.0);
            m = optics::bs_transmit_matrix(bs);
        } else if (s.kind == "bs_r") {
            optics::BeamSplitterSpec bs{};
            bs.rp = take(s, "rp");
            bs.rs = take(s, "rs");
            bs.tp = bs.ts = 0.0;
            bs.phi_r = take(s, "phi", 0.0);
            m = optics::bs_reflect_matrix(bs);
        } else {
            throw ConfigError("unknown element kind [" + s.kind + "] (expected polarizer, waveplate, bs_t, bs_r)",
                              s.line);
        }
    } catch (const DomainError& e) {
        throw ConfigError("[" + s.kind + "]: " + e.what(), s.line);
    }
    if (!s.values.empty()) {
        const auto& [key, where] = *s.values.begin();
        throw ConfigError("unknown key '" + key + "' in [" + s.kind + "]", where.second);
    }
    return m;
}

}  // namespace

optics::OpticalTrain parse_train(std::string_view text) {
    optics::OpticalTrain train;
    std::optional<Section> current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", lineno);
            if (current) train.elements.push_back(build(std::move(*current)));
            current = Section{trim(line.substr(1, line.size() - 2)), lineno, {}};
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!current) {
            if (key == "source" || key == "analyzer") {
                try {
                    (key == "source" ? train.source : train.analyzer) = optics::parse_basis_state(value);
                } catch (const DomainError&) {
                    throw ConfigError(key + " must be H, V, D or M", lineno);
                }
            } else if (key != "path") {
                throw ConfigError("key '" + key + "' before the first element", lineno);
            } else if (value == "HV") {
                train.path = optics::TrainPath::HV;
            } else if (value == "DM") {
                train.path = optics::TrainPath::DM;
            } else {
                throw ConfigError("path must be HV or DM", lineno);
            }
            continue;
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(value, &used);
            if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw ConfigError("value of '" + key + "' is not a number: '" + value + "'", lineno);
        }
        auto [name, converted] = canonical(key, v);
        current->values[name] = {converted, lineno};
    }
    if (current) train.elements.push_back(build(std::move(*current)));
    if (train.elements.empty()) throw ConfigError("optical train has no elements");
    return train;
}

optics::OpticalTrain load_train(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open optical train '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_train(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace uwqkd::io
