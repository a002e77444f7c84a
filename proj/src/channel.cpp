#include "uwqkd/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "uwqkd/errors.hpp"

namespace uwqkd::channel {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

constexpr std::array kModes{PropagationMode::Upward, PropagationMode::Downward, PropagationMode::Horizontal};
constexpr std::array kPhases{LunarPhase::FullMoon, LunarPhase::Gibbous, LunarPhase::Quarter};
constexpr std::array kWaters{WaterType::JerlovI, WaterType::JerlovII};

}  // namespace

WaterType parse_water_type(std::string_view s) {
    const auto v = lower(s);
    if (v == "i" || v == "1" || v == "jerlovi" || v == "jerlov1") return WaterType::JerlovI;
    if (v == "ii" || v == "2" || v == "jerlovii" || v == "jerlov2") return WaterType::JerlovII;
    throw DomainError("unknown water type '" + std::string(s) + "'");
}

PropagationMode parse_mode(std::string_view s) {
    const auto v = lower(s);
    if (v == "u" || v == "upward") return PropagationMode::Upward;
    if (v == "d" || v == "downward") return PropagationMode::Downward;
    if (v == "h" || v == "horizontal") return PropagationMode::Horizontal;
    throw DomainError("unknown propagation mode '" + std::string(s) + "'");
}

LunarPhase parse_lunar_phase(std::string_view s) {
    const auto v = lower(s);
    if (v == "full" || v == "fullmoon") return LunarPhase::FullMoon;
    if (v == "gibbous") return LunarPhase::Gibbous;
    if (v == "quarter") return LunarPhase::Quarter;
    throw DomainError("unknown lunar phase '" + std::string(s) + "'");
}

std::string_view to_string(WaterType w) { return w == WaterType::JerlovI ? "JerlovI" : "JerlovII"; }

std::string_view to_string(PropagationMode m) {
    switch (m) {
        case PropagationMode::Upward: return "upward";
        case PropagationMode::Downward: return "downward";
        case PropagationMode::Horizontal: return "horizontal";
    }
    return "?";
}

std::string_view to_string(LunarPhase p) {
    switch (p) {
        case LunarPhase::FullMoon: return "full";
        case LunarPhase::Gibbous: return "gibbous";
        case LunarPhase::Quarter: return "quarter";
    }
    return "?";
}

std::string_view csv_code(WaterType w) { return w == WaterType::JerlovI ? "I" : "II"; }

std::string_view csv_code(PropagationMode m) {
    switch (m) {
        case PropagationMode::Upward: return "U";
        case PropagationMode::Downward: return "D";
        case PropagationMode::Horizontal: return "H";
    }
    return "?";
}

std::string_view csv_code(LunarPhase p) { return to_string(p); }

void ChannelScenario::validate() const {
    if (!(std::isfinite(attenuation) && attenuation > 0.0))
        throw DomainError("attenuation coefficient must be positive");
    if (!(tx_depth_m >= 0.0) || !(rx_fixed_depth_m >= 0.0)) throw DomainError("depths must be non-negative");
}

double default_rx_depth(PropagationMode mode) {
    return mode == PropagationMode::Horizontal ? 100.0 : 1.0;
}

ChannelScenario make_scenario(PropagationMode mode, double attenuation, WaterType water, LunarPhase phase) {
    ChannelScenario s;
    s.mode = mode;
    s.attenuation = attenuation;
    s.water_type = water;
    s.lunar_phase = phase;
    s.tx_depth_m = 1.0;
    s.rx_fixed_depth_m = default_rx_depth(mode);
    return s;
}

double ReceiverGeometry::solid_angle() const { return channel::solid_angle(fov_rad); }

void ReceiverGeometry::validate() const {
    if (!(std::isfinite(aperture_m2) && aperture_m2 >= 0.0)) throw DomainError("aperture must be non-negative");
    if (!(fov_rad >= 0.0 && fov_rad <= std::numbers::pi)) throw DomainError("field of view must lie in [0, pi]");
}

double link_transmittance(double attenuation, double range_m) {
    if (!(range_m >= 0.0)) throw DomainError("range must be non-negative");
    return std::exp(-attenuation * range_m);
}

double solid_angle(double fov_rad) {
    if (!(fov_rad >= 0.0 && fov_rad <= std::numbers::pi)) throw DomainError("field of view must lie in [0, pi]");
    // 2 pi (1 - cos(g/2)) written without the cancellation at small angles.
    const double s = std::sin(fov_rad / 4.0);
    return 4.0 * std::numbers::pi * s * s;
}

double receiver_depth(const ChannelScenario& scenario, double range_m) {
    if (!(range_m >= 0.0)) throw DomainError("range must be non-negative");
    switch (scenario.mode) {
        case PropagationMode::Downward: return scenario.tx_depth_m + range_m;
        case PropagationMode::Upward:
        case PropagationMode::Horizontal: return scenario.rx_fixed_depth_m;
    }
    return scenario.rx_fixed_depth_m;
}

RadianceTable::RadianceTable(const std::vector<RadianceRow>& rows) {
    for (const auto& row : rows) {
        if (!(std::isfinite(row.depth_m) && row.depth_m >= 0.0)) throw ConfigError("radiance table: depth must be non-negative");
        if (!(std::isfinite(row.radiance) && row.radiance > 0.0)) throw ConfigError("radiance table: radiance must be positive");
        auto& s = series_[Key{row.mode, row.phase, row.water}];
        if (!s.depth.empty() && !(row.depth_m > s.depth.back()))
            throw ConfigError("radiance table: depths must be strictly increasing within each series");
        s.depth.push_back(row.depth_m);
        s.log_radiance.push_back(std::log(row.radiance));
    }
}

RadianceSample RadianceTable::lookup(PropagationMode mode, LunarPhase phase, WaterType water, double depth_m) const {
    const auto it = series_.find(Key{mode, phase, water});
    if (it == series_.end())
        throw TableGapError("scenario not covered by table: mode " + std::string(to_string(mode)) + ", phase " +
                            std::string(to_string(phase)) + ", water " + std::string(to_string(water)));
    const auto& d = it->second.depth;
    const auto& y = it->second.log_radiance;
    if (depth_m <= d.front()) return {std::exp(y.front()), depth_m < d.front()};
    if (depth_m >= d.back()) return {std::exp(y.back()), depth_m > d.back()};

    const auto hi = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), depth_m) - d.begin());
    const auto lo = hi - 1;
    if (depth_m == d[lo]) return {std::exp(y[lo]), false};
    const double t = (depth_m - d[lo]) / (d[hi] - d[lo]);
    return {std::exp(y[lo] + t * (y[hi] - y[lo])), false};
}

std::vector<RadianceRow> RadianceTable::rows() const {
    std::vector<RadianceRow> out;
    for (const auto& [key, s] : series_) {
        const auto [mode, phase, water] = key;
        for (std::size_t i = 0; i < s.depth.size(); ++i)
            out.push_back({s.depth[i], mode, phase, water, std::exp(s.log_radiance[i])});
    }
    return out;
}

RadianceSample radiance(const RadianceTable& table, const ChannelScenario& scenario, double depth_m) {
    return table.lookup(scenario.mode, scenario.lunar_phase, scenario.water_type, depth_m);
}

RadianceTable synthesize_radiance_table(const SyntheticRadianceModel& model) {
    std::vector<RadianceRow> rows;
    const auto steps = static_cast<int>(std::floor(model.max_depth_m / model.depth_step_m + 0.5));
    for (auto water : kWaters) {
        const double chi = water == WaterType::JerlovI ? model.jerlov1_attenuation : model.jerlov2_attenuation;
        const double kd = model.kd_ratio * chi;
        for (auto mode : kModes) {
            const double surface = mode == PropagationMode::Downward ? model.downward_surface : model.scattered_surface;
            double scale = 1.0;
            for (auto phase : kPhases) {
                for (int i = 0; i <= steps; ++i) {
                    const double depth = i * model.depth_step_m;
                    rows.push_back({depth, mode, phase, water, surface * scale * std::exp(-kd * depth)});
                }
                scale /= model.phase_step;
            }
        }
    }
    return RadianceTable(rows);
}

RadianceTable read_radiance_csv(std::istream& in) {
    static constexpr std::string_view kHeader = "depth_m,mode,lunar_phase,water_type,radiance_w_m2_sr_nm";
    std::string line;
    int lineno = 0;
    bool seen_header = false;
    std::vector<RadianceRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (!seen_header) {
            if (text != kHeader) throw ConfigError("radiance CSV header must be '" + std::string(kHeader) + "'", lineno);
            seen_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 5) throw ConfigError("expected 5 fields", lineno);
        try {
            std::size_t used = 0;
            RadianceRow row{};
            row.depth_m = std::stod(fields[0], &used);
            if (used != fields[0].size()) throw ConfigError("bad depth '" + fields[0] + "'", lineno);
            row.mode = parse_mode(fields[1]);
            row.phase = parse_lunar_phase(fields[2]);
            row.water = parse_water_type(fields[3]);
            row.radiance = std::stod(fields[4], &used);
            if (used != fields[4].size()) throw ConfigError("bad radiance '" + fields[4] + "'", lineno);
            rows.push_back(row);
        } catch (const DomainError& e) {
            throw ConfigError(e.what(), lineno);
        } catch (const std::logic_error&) {
            throw ConfigError("unparseable number", lineno);
        }
    }
    if (!seen_header) throw ConfigError("radiance CSV is empty (header required)");
    try {
        return RadianceTable(rows);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what());
    }
}

RadianceTable load_radiance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open radiance table '" + path + "'");
    try {
        return read_radiance_csv(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string radiance_csv(const RadianceTable& table) {
    std::string out = "depth_m,mode,lunar_phase,water_type,radiance_w_m2_sr_nm\n";
    char buf[64];
    for (const auto& row : table.rows()) {
        std::snprintf(buf, sizeof buf, "%.17g", row.depth_m);
        out += buf;
        out += ',';
        out += csv_code(row.mode);
        out += ',';
        out += csv_code(row.phase);
        out += ',';
        out += csv_code(row.water);
        std::snprintf(buf, sizeof buf, ",%.17g\n", row.radiance);
        out += buf;
    }
    return out;
}

namespace {

// Photons/s through the receiver field of view and filter, gated, over one
// basis group, before detection efficiency.
double incident_group(double radiance, const ReceiverGeometry& geom, const SystemParams& sys) {
    constexpr double hc = PhysicalConstants::planck * PhysicalConstants::speed_of_light;
    return radiance * geom.aperture_m2 * sys.gate_time_s * sys.wavelength_m * sys.filter_bandwidth_nm *
           geom.solid_angle() / (2.0 * hc * sys.bit_period());
}

}  // namespace

BackgroundRate background_rate(double radiance, const ReceiverGeometry& geom, const SystemParams& sys) {
    const double group = incident_group(radiance, geom, sys) * sys.detector_efficiency * sys.optics_transmittance;
    return {group, 0.5 * group};
}

BackgroundRate incident_background_rate(double radiance, const ReceiverGeometry& geom, const SystemParams& sys) {
    const double group = incident_group(radiance, geom, sys);
    return {group, 0.5 * group};
}

}  // namespace uwqkd::channel
