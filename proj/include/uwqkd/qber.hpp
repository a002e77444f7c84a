#pragma once

#include <memory>
#include <optional>

#include "uwqkd/channel.hpp"
#include "uwqkd/params.hpp"

namespace uwqkd {

/// Everything needed to evaluate the link at a given range. The radiance table
/// is shared and read-only; copies of a Link are cheap.
struct Link {
    SystemParams system;
    channel::ReceiverGeometry geometry;
    channel::ChannelScenario channel;
    std::shared_ptr<const channel::RadianceTable> radiance;
    // When set, replaces the table lookup (W / (m^2 sr nm)).
    std::optional<double> radiance_override;

    void validate() const;
};

// Default synthesized table, built once.
std::shared_ptr<const channel::RadianceTable> default_radiance_table();

}  // namespace uwqkd

namespace uwqkd::qber {

enum class Formula { Modified, Legacy };

/// Detection rates (counts/s) in one basis group.
struct RateBreakdown {
    double signal = 0.0;
    double dark_group = 0.0;
    double background_group = 0.0;
    double scatter = 0.0;
    double background_error = 0.0;  // share of background_group on the wrong detector
    double radiance = 0.0;          // background radiance used
    bool radiance_clamped = false;

    double total() const { return signal + dark_group + background_group + scatter; }
};

struct QberBreakdown {
    double optical = 0.0;
    double dark = 0.0;
    double background = 0.0;
    double scatter = 0.0;

    double total() const { return optical + dark + background + scatter; }
};

// Radiance seen by the receiver at `range_m` (override or table lookup).
channel::RadianceSample link_radiance(const Link& link, double range_m);

RateBreakdown rates(const Link& link, double range_m, Formula formula = Formula::Modified);

QberBreakdown qber(const Link& link, double range_m, Formula formula);
QberBreakdown qber_modified(const Link& link, double range_m);
QberBreakdown qber_legacy(const Link& link, double range_m);

// Decomposition of a rate breakdown into error fractions (modified-form numerator).
QberBreakdown decompose(const RateBreakdown& rates, const SystemParams& sys);

}  // namespace uwqkd::qber
