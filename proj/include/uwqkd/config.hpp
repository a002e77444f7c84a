#pragma once

/**
 * Plain-text configuration: `key = value` lines under `[system]`, `[channel]`,
 * `[protocol]` and `[geometry]` sections, `#` comments. A top-level
 * `preset = ordinary|optimal` seeds every value; explicit keys override it.
 * Units are carried by the key suffix (gamma_mrad, A_cm2, f_mhz, ...) and
 * converted to SI on load.
 */

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "uwqkd/channel.hpp"
#include "uwqkd/params.hpp"
#include "uwqkd/qber.hpp"

namespace uwqkd::io {

struct Config {
    SystemParams system;
    channel::ChannelScenario channel;
    ProtocolParams protocol;
    channel::ReceiverGeometry geometry;
    double kd_ratio = 0.5;  // background diffuse attenuation / beam attenuation
};

// Ordinary (commodity detectors, ordinary beam splitter) and optimal
// (SNSPD, narrow filter, optimized splitter) hardware sets.
Config preset(std::string_view name);

Config parse_config(std::string_view text);
Config load_config(const std::string& path);

// Canonical SI-keyed text; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const Config& config);

// Environment variable naming a directory whose `radiance.csv` replaces the
// synthesized background table.
inline constexpr const char* kDataDirEnv = "UWQKD_DATA_DIR";

/// Radiance table for a config: explicit file, else $UWQKD_DATA_DIR/radiance.csv
/// when present, else the synthesized table with the config's kd_ratio.
std::shared_ptr<const channel::RadianceTable> resolve_radiance(const Config& config,
                                                               const std::optional<std::string>& path = {});

Link make_link(const Config& config, std::shared_ptr<const channel::RadianceTable> table);

}  // namespace uwqkd::io
