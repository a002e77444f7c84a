#include "uwqkd/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "uwqkd/errors.hpp"

namespace uwqkd::io {

namespace {

using Setter = std::function<void(Config&, double)>;

struct KeySpec {
    std::string section;
    std::string base;
    std::map<std::string, double> suffix_scale;  // "" for dimensionless keys
    Setter set;
    std::function<bool(double)> valid;
    std::string range_text;
};

bool positive(double v) { return v > 0.0; }
bool nonneg(double v) { return v >= 0.0; }
bool unit_interval(double v) { return v > 0.0 && v <= 1.0; }

const std::vector<KeySpec>& numeric_keys() {
    static const std::vector<KeySpec> keys = {
        {"system", "P", {{"", 1.0}}, [](Config& c, double v) { c.system.contrast = v; },
         [](double v) { return v >= 0.0 && v <= 0.5; }, "[0, 0.5]"},
        {"system", "mu", {{"", 1.0}}, [](Config& c, double v) { c.system.mean_photon_number = v; }, positive, "> 0"},
        {"system", "eta", {{"", 1.0}}, [](Config& c, double v) { c.system.detector_efficiency = v; }, unit_interval,
         "(0, 1]"},
        {"system", "eta_opt", {{"", 1.0}}, [](Config& c, double v) { c.system.optics_transmittance = v; },
         unit_interval, "(0, 1]"},
        {"system", "f", {{"hz", 1.0}, {"mhz", 1e6}}, [](Config& c, double v) { c.system.pulse_rate_hz = v; },
         positive, "> 0"},
        {"system", "dt_gate", {{"s", 1.0}, {"ns", 1e-9}, {"ps", 1e-12}},
         [](Config& c, double v) { c.system.gate_time_s = v; }, nonneg, ">= 0"},
        {"system", "I_dc", {{"", 1.0}}, [](Config& c, double v) { c.system.dark_count_rate = v; }, nonneg, ">= 0"},
        {"system", "lambda", {{"m", 1.0}, {"nm", 1e-9}}, [](Config& c, double v) { c.system.wavelength_m = v; },
         positive, "> 0"},
        {"system", "dlambda", {{"nm", 1.0}}, [](Config& c, double v) { c.system.filter_bandwidth_nm = v; }, nonneg,
         ">= 0"},
        {"system", "N_scatter", {{"", 1.0}}, [](Config& c, double v) { c.system.scatter_rate = v; }, nonneg, ">= 0"},
        {"system", "P_s", {{"", 1.0}}, [](Config& c, double v) { c.system.scatter_error_prob = v; },
         [](double v) { return v >= 0.0 && v <= 1.0; }, "[0, 1]"},
        {"channel", "chi_c", {{"", 1.0}}, [](Config& c, double v) { c.channel.attenuation = v; }, positive, "> 0"},
        {"channel", "tx_depth", {{"m", 1.0}}, [](Config& c, double v) { c.channel.tx_depth_m = v; }, nonneg, ">= 0"},
        {"channel", "rx_depth", {{"m", 1.0}}, [](Config& c, double v) { c.channel.rx_fixed_depth_m = v; }, nonneg,
         ">= 0"},
        {"channel", "kd_ratio", {{"", 1.0}}, [](Config& c, double v) { c.kd_ratio = v; }, positive, "> 0"},
        {"protocol", "q", {{"", 1.0}}, [](Config& c, double v) { c.protocol.sifting = v; }, unit_interval, "(0, 1]"},
        {"protocol", "f_ec", {{"", 1.0}}, [](Config& c, double v) { c.protocol.ec_efficiency = v; },
         [](double v) { return v >= 1.0; }, ">= 1"},
        {"protocol", "mu", {{"", 1.0}}, [](Config& c, double v) { c.protocol.mu = v; }, positive, "> 0"},
        {"protocol", "nu", {{"", 1.0}}, [](Config& c, double v) { c.protocol.nu = v; }, positive, "> 0"},
        {"geometry", "A", {{"m2", 1.0}, {"cm2", 1e-4}}, [](Config& c, double v) { c.geometry.aperture_m2 = v; },
         nonneg, ">= 0"},
        {"geometry", "gamma", {{"rad", 1.0}, {"mrad", 1e-3}, {"deg", 3.14159265358979323846 / 180.0}},
         [](Config& c, double v) { c.geometry.fov_rad = v; },
         [](double v) { return v >= 0.0 && v <= 3.14159265358979323846; }, "[0, pi] rad"},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string full_name(const KeySpec& k, const std::string& suffix) {
    return suffix.empty() ? k.base : k.base + "_" + suffix;
}

// Resolves `key` in `section` to a spec and unit scale.
std::pair<const KeySpec*, double> find_key(const std::string& section, const std::string& key, int line) {
    const KeySpec* base_match = nullptr;
    for (const auto& k : numeric_keys()) {
        if (k.section != section) continue;
        for (const auto& [suffix, scale] : k.suffix_scale)
            if (full_name(k, suffix) == key) return {&k, scale};
        if (key == k.base || key.rfind(k.base + "_", 0) == 0) base_match = &k;
    }
    if (base_match) {
        // Longer keys sharing a prefix (eta_opt vs eta) are distinct keys, not suffixes.
        std::string expected;
        for (const auto& [suffix, scale] : base_match->suffix_scale) {
            if (!expected.empty()) expected += ", ";
            expected += full_name(*base_match, suffix);
        }
        throw ConfigError("unit-suffix mismatch for '" + key + "' in [" + section + "] (expected " + expected + ")",
                          line);
    }
    throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

double parse_number(const std::string& text, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("value of '" + key + "' is not a number: '" + text + "'", line);
    }
}

}  // namespace

Config preset(std::string_view name) {
    Config c;  // defaults are the ordinary hardware set
    c.system = SystemParams{};
    c.system.contrast = 0.017;
    c.system.filter_bandwidth_nm = 1.0;
    c.system.detector_efficiency = 0.2;
    c.system.gate_time_s = 5e-9;
    c.system.dark_count_rate = 100.0;
    c.system.pulse_rate_hz = 40e6;
    c.system.mean_photon_number = 0.1;
    c.system.optics_transmittance = 0.95;
    c.geometry.fov_rad = 10e-3;
    c.geometry.aperture_m2 = 30e-4;
    c.channel = channel::make_scenario(channel::PropagationMode::Downward, 0.03);
    c.protocol.mu = c.system.mean_photon_number;
    if (name == "ordinary") return c;
    if (name == "optimal") {
        c.system.contrast = 2.3e-4;
        c.system.filter_bandwidth_nm = 0.12;
        c.system.detector_efficiency = 0.8;
        c.system.gate_time_s = 200e-12;
        c.system.dark_count_rate = 1.0;
        return c;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected ordinary or optimal)");
}

Config parse_config(std::string_view text) {
    std::vector<Entry> entries;
    std::string preset_name = "ordinary";
    std::string section;
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
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "channel" && section != "protocol" && section != "geometry")
                throw ConfigError("unknown section [" + section + "]", lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", lineno);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", lineno);
        if (section.empty()) {
            if (key != "preset") throw ConfigError("key '" + key + "' outside of any section", lineno);
            preset_name = value;
            continue;
        }
        entries.push_back({section, key, value, lineno});
    }

    Config c = preset(preset_name);
    bool mu_explicit = false;
    bool rx_explicit = false;
    bool chi_explicit = false;
    for (const auto& e : entries) {
        try {
            if (e.section == "channel" && e.key == "mode") {
                c.channel.mode = channel::parse_mode(e.value);
                continue;
            }
            if (e.section == "channel" && e.key == "water_type") {
                c.channel.water_type = channel::parse_water_type(e.value);
                continue;
            }
            if (e.section == "channel" && e.key == "lunar_phase") {
                c.channel.lunar_phase = channel::parse_lunar_phase(e.value);
                continue;
            }
        } catch (const DomainError& err) {
            throw ConfigError(err.what(), e.line);
        }
        const auto [spec, scale] = find_key(e.section, e.key, e.line);
        const double v = parse_number(e.value, e.key, e.line) * scale;
        if (!spec->valid(v))
            throw ConfigError("'" + e.key + "' = " + e.value + " violates " + spec->base + " " + spec->range_text,
                              e.line);
        spec->set(c, v);
        if (e.section == "protocol" && spec->base == "mu") mu_explicit = true;
        if (e.section == "channel" && spec->base == "rx_depth") rx_explicit = true;
        if (e.section == "channel" && spec->base == "chi_c") chi_explicit = true;
    }
    if (!mu_explicit) c.protocol.mu = c.system.mean_photon_number;
    if (!rx_explicit) c.channel.rx_fixed_depth_m = channel::default_rx_depth(c.channel.mode);
    if (!chi_explicit) c.channel.attenuation = c.channel.water_type == channel::WaterType::JerlovI ? 0.03 : 0.18;
    if (!(c.protocol.nu < c.protocol.mu)) throw ConfigError("[protocol] nu must be smaller than mu");
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string to_config_text(const Config& c) {
    std::string out;
    char buf[128];
    auto kv = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out += buf;
    };
    auto ks = [&](const char* key, std::string_view v) {
        out += key;
        out += " = ";
        out += v;
        out += '\n';
    };
    out += "[system]\n";
    kv("P", c.system.contrast);
    kv("mu", c.system.mean_photon_number);
    kv("eta", c.system.detector_efficiency);
    kv("eta_opt", c.system.optics_transmittance);
    kv("f_hz", c.system.pulse_rate_hz);
    kv("dt_gate_s", c.system.gate_time_s);
    kv("I_dc", c.system.dark_count_rate);
    kv("lambda_m", c.system.wavelength_m);
    kv("dlambda_nm", c.system.filter_bandwidth_nm);
    kv("N_scatter", c.system.scatter_rate);
    kv("P_s", c.system.scatter_error_prob);
    out += "\n[channel]\n";
    ks("water_type", channel::csv_code(c.channel.water_type));
    kv("chi_c", c.channel.attenuation);
    ks("mode", channel::to_string(c.channel.mode));
    ks("lunar_phase", channel::to_string(c.channel.lunar_phase));
    kv("tx_depth_m", c.channel.tx_depth_m);
    kv("rx_depth_m", c.channel.rx_fixed_depth_m);
    kv("kd_ratio", c.kd_ratio);
    out += "\n[protocol]\n";
    kv("q", c.protocol.sifting);
    kv("f_ec", c.protocol.ec_efficiency);
    kv("mu", c.protocol.mu);
    kv("nu", c.protocol.nu);
    out += "\n[geometry]\n";
    kv("A_m2", c.geometry.aperture_m2);
    kv("gamma_rad", c.geometry.fov_rad);
    return out;
}

std::shared_ptr<const channel::RadianceTable> resolve_radiance(const Config& config,
                                                               const std::optional<std::string>& path) {
    if (path) return std::make_shared<const channel::RadianceTable>(channel::load_radiance_csv(*path));
    if (const char* dir = std::getenv(kDataDirEnv); dir && *dir) {
        const auto candidate = std::filesystem::path(dir) / "radiance.csv";
        if (std::filesystem::exists(candidate))
            return std::make_shared<const channel::RadianceTable>(channel::load_radiance_csv(candidate.string()));
    }
    if (config.kd_ratio == channel::SyntheticRadianceModel{}.kd_ratio) return default_radiance_table();
    channel::SyntheticRadianceModel model;
    model.kd_ratio = config.kd_ratio;
    return std::make_shared<const channel::RadianceTable>(channel::synthesize_radiance_table(model));
}

Link make_link(const Config& config, std::shared_ptr<const channel::RadianceTable> table) {
    Link link;
    link.system = config.system;
    link.geometry = config.geometry;
    link.channel = config.channel;
    link.radiance = std::move(table);
    return link;
}

}  // namespace uwqkd::io
