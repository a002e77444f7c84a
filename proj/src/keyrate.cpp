#include "uwqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uwqkd/errors.hpp"

namespace uwqkd::keyrate {

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy argument must lie in [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

Method parse_method(std::string_view s) {
    if (s == "sifted") return Method::Sifted;
    if (s == "decoy") return Method::Decoy;
    if (s == "nodecoy") return Method::NoDecoy;
    if (s == "onedecoy") return Method::OneDecoy;
    throw DomainError("unknown key-rate method '" + std::string(s) + "'");
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Sifted: return "sifted";
        case Method::Decoy: return "decoy";
        case Method::NoDecoy: return "nodecoy";
        case Method::OneDecoy: return "onedecoy";
    }
    return "?";
}

double sifted_rate(const Link& link, const ProtocolParams& proto, double range_m) {
    const auto& sys = link.system;
    const double t = channel::link_transmittance(link.channel.attenuation, range_m);
    return sys.pulse_rate_hz * proto.mu * t * proto.sifting * (sys.detector_efficiency / 2.0) *
           sys.optics_transmittance;
}

GainPoint gain_point(const Link& link, double range_m, double intensity) {
    if (!(intensity > 0.0)) throw DomainError("intensity must be positive");
    Link at = link;
    at.system.mean_photon_number = intensity;
    const auto r = qber::rates(at, range_m);
    return {r.total() * at.system.bit_period(), qber::decompose(r, at.system).total()};
}

SinglePhotonEstimate ideal_decoy_estimate(const Link& link, double range_m, double mu) {
    Link unit = link;
    unit.system.mean_photon_number = 1.0;
    const auto r = qber::rates(unit, range_m);
    const double dt = unit.system.bit_period();
    const double eta_sys = r.signal * dt;
    const double y0 = (r.dark_group + r.background_group + r.scatter) * dt;
    const double y0_err = (0.5 * r.dark_group + r.background_error + link.system.scatter_error_prob * r.scatter) * dt;

    SinglePhotonEstimate est;
    est.yield = eta_sys + y0;
    if (!(est.yield > 0.0)) throw DomainError("no single-photon yield");
    est.gain = mu * std::exp(-mu) * est.yield;
    est.error = (link.system.contrast * eta_sys + y0_err) / est.yield;
    return est;
}

SinglePhotonEstimate one_decoy_estimate(const GainPoint& signal, const GainPoint& decoy, double mu, double nu) {
    if (!(nu > 0.0 && nu < mu)) throw DomainError("one-decoy estimate requires 0 < nu < mu");
    SinglePhotonEstimate est;
    const double bracket = decoy.gain * std::exp(nu) - signal.gain * std::exp(mu) * nu * nu / (mu * mu);
    est.yield = mu / (mu * nu - nu * nu) * bracket;
    if (!(est.yield > 0.0)) {
        est.yield = 0.0;
        est.yield_floored = true;
        throw DomainError("no single-photon yield");
    }
    est.gain = mu * std::exp(-mu) * est.yield;
    const double e1 = decoy.error * decoy.gain * std::exp(nu) / (est.yield * nu);
    est.error = std::clamp(e1, 0.0, 0.5);
    est.error_clamped = est.error != e1;
    return est;
}

SecureRate secure_rate_decoy(const GainPoint& signal, const SinglePhotonEstimate& single, const ProtocolParams& proto,
                             double pulse_rate_hz) {
    if (single.error > 0.5) return {0.0, true};
    const double raw = proto.sifting * (-signal.gain * proto.ec_efficiency * binary_entropy(signal.error) +
                                        single.gain * (1.0 - binary_entropy(single.error)));
    return {pulse_rate_hz * std::max(0.0, raw), raw < 0.0};
}

double untagged_fraction(double gain, double mu) {
    if (!(gain > 0.0)) return 0.0;
    const double multi = 1.0 - std::exp(-mu) * (1.0 + mu);
    return std::max(0.0, 1.0 - multi / gain);
}

NoDecoyRate secure_rate_no_decoy(const GainPoint& signal, const ProtocolParams& proto, double mu,
                                 double pulse_rate_hz) {
    NoDecoyRate out;
    out.omega = untagged_fraction(signal.gain, mu);
    double privacy = 0.0;
    if (out.omega > 0.0 && signal.error / out.omega <= 0.5)
        privacy = out.omega * (1.0 - binary_entropy(signal.error / out.omega));
    const double raw =
        proto.sifting * signal.gain * (-proto.ec_efficiency * binary_entropy(signal.error) + privacy);
    out.bits_per_s = pulse_rate_hz * std::max(0.0, raw);
    out.insecure = !(raw > 0.0);
    return out;
}

double KeyRateReport::secure_for(Method m) const {
    switch (m) {
        case Method::Sifted: return sifted;
        case Method::Decoy: return secure_decoy;
        case Method::NoDecoy: return secure_no_decoy;
        case Method::OneDecoy: return secure_one_decoy;
    }
    return 0.0;
}

KeyRateReport key_rate_report(const Link& link, const ProtocolParams& proto, double range_m, Method method) {
    proto.validate();
    const double f = link.system.pulse_rate_hz;
    KeyRateReport rep;
    rep.sifted = sifted_rate(link, proto, range_m);

    const auto signal = gain_point(link, range_m, proto.mu);

    const auto ideal = ideal_decoy_estimate(link, range_m, proto.mu);
    const auto decoy_rate = secure_rate_decoy(signal, ideal, proto, f);
    rep.secure_decoy = decoy_rate.bits_per_s;

    const auto nodecoy = secure_rate_no_decoy(signal, proto, proto.mu, f);
    rep.secure_no_decoy = nodecoy.bits_per_s;
    rep.omega_untagged = nodecoy.omega;

    SinglePhotonEstimate one;
    bool one_insecure = false;
    try {
        one = one_decoy_estimate(signal, gain_point(link, range_m, proto.nu), proto.mu, proto.nu);
        const auto r = secure_rate_decoy(signal, one, proto, f);
        rep.secure_one_decoy = r.bits_per_s;
        one_insecure = r.insecure;
    } catch (const DomainError&) {
        rep.secure_one_decoy = 0.0;
        one_insecure = true;
    }

    rep.secure = rep.secure_for(method);
    switch (method) {
        case Method::Sifted: break;
        case Method::Decoy:
            rep.single_yield = ideal.yield;
            rep.single_gain = ideal.gain;
            rep.single_error = ideal.error;
            rep.insecure = decoy_rate.insecure;
            break;
        case Method::NoDecoy: rep.insecure = nodecoy.insecure; break;
        case Method::OneDecoy:
            rep.single_yield = one.yield;
            rep.single_gain = one.gain;
            rep.single_error = one.error;
            rep.insecure = one_insecure;
            break;
    }
    return rep;
}

double secure_rate(const Link& link, const ProtocolParams& proto, double range_m, Method method) {
    return key_rate_report(link, proto, range_m, method).secure;
}

}  // namespace uwqkd::keyrate
