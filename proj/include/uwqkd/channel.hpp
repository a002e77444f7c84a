#pragma once

/**
 * Seawater channel: Beer-Lambert transmittance, receiver depth per propagation
 * mode, and background spectral radiance lookup.
 */

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "uwqkd/params.hpp"

namespace uwqkd::channel {

// CODATA 2018 exact values.
struct PhysicalConstants {
    static constexpr double planck = 6.62607015e-34;       // J s
    static constexpr double speed_of_light = 299792458.0;  // m/s
};

enum class WaterType { JerlovI, JerlovII };
enum class PropagationMode { Upward, Downward, Horizontal };
enum class LunarPhase { FullMoon, Gibbous, Quarter };

WaterType parse_water_type(std::string_view s);
PropagationMode parse_mode(std::string_view s);
LunarPhase parse_lunar_phase(std::string_view s);
std::string_view to_string(WaterType w);
std::string_view to_string(PropagationMode m);
std::string_view to_string(LunarPhase p);
// Single-letter / short codes used in the radiance CSV.
std::string_view csv_code(WaterType w);
std::string_view csv_code(PropagationMode m);
std::string_view csv_code(LunarPhase p);

struct ChannelScenario {
    WaterType water_type = WaterType::JerlovI;
    double attenuation = 0.03;  // beam attenuation coefficient, 1/m
    PropagationMode mode = PropagationMode::Downward;
    LunarPhase lunar_phase = LunarPhase::FullMoon;
    double tx_depth_m = 1.0;
    // Depth of the stationary receiver in upward (1 m) and horizontal (100 m)
    // modes; unused for downward.
    double rx_fixed_depth_m = 1.0;

    void validate() const;
};

// Scenario with the mode-specific default receiver depth.
ChannelScenario make_scenario(PropagationMode mode, double attenuation = 0.03,
                              WaterType water = WaterType::JerlovI,
                              LunarPhase phase = LunarPhase::FullMoon);
double default_rx_depth(PropagationMode mode);

struct ReceiverGeometry {
    double aperture_m2 = 30e-4;
    double fov_rad = 10e-3;

    double solid_angle() const;
    void validate() const;
};

double link_transmittance(double attenuation, double range_m);

// Solid angle of a cone of full apex angle `fov_rad`.
double solid_angle(double fov_rad);

double receiver_depth(const ChannelScenario& scenario, double range_m);

struct RadianceRow {
    double depth_m;
    PropagationMode mode;
    LunarPhase phase;
    WaterType water;
    double radiance;  // W / (m^2 sr nm)
};

struct RadianceSample {
    double value = 0.0;
    bool clamped = false;  // depth fell outside the tabulated range
};

/// Background spectral radiance versus depth, one series per
/// (mode, lunar phase, water type). Immutable after construction.
class RadianceTable {
public:
    explicit RadianceTable(const std::vector<RadianceRow>& rows);

    // Log-linear interpolation in depth; clamps outside the tabulated range.
    RadianceSample lookup(PropagationMode mode, LunarPhase phase, WaterType water, double depth_m) const;

    std::vector<RadianceRow> rows() const;

private:
    using Key = std::tuple<PropagationMode, LunarPhase, WaterType>;
    struct Series {
        std::vector<double> depth;
        std::vector<double> log_radiance;
    };
    std::map<Key, Series> series_;
};

RadianceSample radiance(const RadianceTable& table, const ChannelScenario& scenario, double depth_m);

/// Parameters of the synthesized exponential-decay background model that
/// stands in for radiative-transfer output. L(d) = L0 * exp(-K_d d) with
/// K_d = kd_ratio * attenuation of the water type.
struct SyntheticRadianceModel {
    double kd_ratio = 0.5;
    double downward_surface = 1e-6;
    double scattered_surface = 1e-8;  // upward and horizontal series
    double phase_step = 10.0;         // full -> gibbous -> quarter divisor
    double jerlov1_attenuation = 0.03;
    double jerlov2_attenuation = 0.18;
    double max_depth_m = 1500.0;
    double depth_step_m = 10.0;
};

RadianceTable synthesize_radiance_table(const SyntheticRadianceModel& model = {});

// CSV with header `depth_m,mode,lunar_phase,water_type,radiance_w_m2_sr_nm`.
RadianceTable read_radiance_csv(std::istream& in);
RadianceTable load_radiance_csv(const std::string& path);
std::string radiance_csv(const RadianceTable& table);

struct BackgroundRate {
    double group = 0.0;        // counts/s over one two-detector basis group
    double error_share = 0.0;  // counts/s landing on the wrong detector
};

// Detected background (detector and receiver-optics efficiencies included).
BackgroundRate background_rate(double radiance, const ReceiverGeometry& geom, const SystemParams& sys);

// Background photons arriving at the detectors, without detector or optics
// efficiency: the form used by the legacy QBER expression.
BackgroundRate incident_background_rate(double radiance, const ReceiverGeometry& geom, const SystemParams& sys);

}  // namespace uwqkd::channel
