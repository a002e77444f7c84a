#include "uwqkd/qber.hpp"

#include <cmath>

#include "uwqkd/errors.hpp"

namespace uwqkd {

void Link::validate() const {
    system.validate();
    geometry.validate();
    channel.validate();
    if (!radiance && !radiance_override) throw DomainError("link has neither a radiance table nor an override");
    if (radiance_override && !(*radiance_override >= 0.0)) throw DomainError("radiance override must be non-negative");
}

std::shared_ptr<const channel::RadianceTable> default_radiance_table() {
    static const auto table = std::make_shared<const channel::RadianceTable>(channel::synthesize_radiance_table());
    return table;
}

}  // namespace uwqkd

namespace uwqkd::qber {

channel::RadianceSample link_radiance(const Link& link, double range_m) {
    if (link.radiance_override) return {*link.radiance_override, false};
    if (!link.radiance) throw DomainError("link has no radiance table");
    return channel::radiance(*link.radiance, link.channel, channel::receiver_depth(link.channel, range_m));
}

RateBreakdown rates(const Link& link, double range_m, Formula formula) {
    const auto& sys = link.system;
    const double transmittance = channel::link_transmittance(link.channel.attenuation, range_m);
    const double efficiency = formula == Formula::Modified
                                  ? sys.detector_efficiency * sys.optics_transmittance
                                  : sys.detector_efficiency;
    const auto sample = link_radiance(link, range_m);
    const auto bg = formula == Formula::Modified
                        ? channel::background_rate(sample.value, link.geometry, sys)
                        : channel::incident_background_rate(sample.value, link.geometry, sys);

    RateBreakdown r;
    r.signal = sys.mean_photon_number * efficiency * transmittance / (2.0 * sys.bit_period());
    r.dark_group = 2.0 * sys.dark_count_rate;
    r.background_group = bg.group;
    r.background_error = bg.error_share;
    r.scatter = formula == Formula::Modified ? sys.scatter_rate : 0.0;
    r.radiance = sample.value;
    r.radiance_clamped = sample.clamped;
    return r;
}

QberBreakdown decompose(const RateBreakdown& r, const SystemParams& sys) {
    const double total = r.total();
    if (!(total > 0.0)) throw DomainError("no counts: every detection term vanishes");
    QberBreakdown q;
    q.optical = sys.contrast * r.signal / total;
    q.dark = 0.5 * r.dark_group / total;
    q.background = r.background_error / total;
    q.scatter = sys.scatter_error_prob * r.scatter / total;
    return q;
}

QberBreakdown qber(const Link& link, double range_m, Formula formula) {
    return decompose(rates(link, range_m, formula), link.system);
}

QberBreakdown qber_modified(const Link& link, double range_m) { return qber(link, range_m, Formula::Modified); }

QberBreakdown qber_legacy(const Link& link, double range_m) { return qber(link, range_m, Formula::Legacy); }

}  // namespace uwqkd::qber
