#pragma once

/**
 * Sifted and secure key rates for BB84 with weak coherent pulses.
 *
 * Secure-rate formulas are per pulse; every function here returns bits/s,
 * i.e. the per-pulse value multiplied by the pulse rate. Negative secure rates
 * are clamped to zero and reported through the `insecure` flag.
 */

#include <string_view>

#include "uwqkd/qber.hpp"

namespace uwqkd::keyrate {

// H2(x) = -x log2 x - (1-x) log2 (1-x), with H2(0) = H2(1) = 0.
double binary_entropy(double x);

/// Per-pulse gain and error rate at one intensity.
struct GainPoint {
    double gain = 0.0;   // Q
    double error = 0.0;  // E
};

struct SinglePhotonEstimate {
    double yield = 0.0;  // Y1
    double gain = 0.0;   // Q1
    double error = 0.0;  // e1
    bool yield_floored = false;
    bool error_clamped = false;
};

struct SecureRate {
    double bits_per_s = 0.0;
    bool insecure = false;  // raw value was negative or single-photon error above 1/2
};

struct NoDecoyRate {
    double bits_per_s = 0.0;
    double omega = 0.0;  // untagged fraction
    bool insecure = false;
};

enum class Method { Sifted, Decoy, NoDecoy, OneDecoy };

Method parse_method(std::string_view s);
std::string_view to_string(Method m);

double sifted_rate(const Link& link, const ProtocolParams& proto, double range_m);

// Q = bit period x total group rate with the mean photon number replaced by
// `intensity`; E = modified QBER at the same settings.
GainPoint gain_point(const Link& link, double range_m, double intensity);

/// Asymptotic (infinitely many decoys) single-photon parameters for the linear
/// detection model: Y1 = Y0 + eta_sys, e1 = (e0 Y0 + P eta_sys + ...) / Y1.
SinglePhotonEstimate ideal_decoy_estimate(const Link& link, double range_m, double mu);

/// One-decoy lower bound on the single-photon yield. Requires 0 < nu < mu.
/// Throws DomainError("no single-photon yield") when the bound is not positive.
SinglePhotonEstimate one_decoy_estimate(const GainPoint& signal, const GainPoint& decoy, double mu, double nu);

SecureRate secure_rate_decoy(const GainPoint& signal, const SinglePhotonEstimate& single, const ProtocolParams& proto,
                             double pulse_rate_hz);

// Untagged fraction 1 - p_multi / Q with Poissonian multi-photon probability.
double untagged_fraction(double gain, double mu);

NoDecoyRate secure_rate_no_decoy(const GainPoint& signal, const ProtocolParams& proto, double mu,
                                 double pulse_rate_hz);

struct KeyRateReport {
    double sifted = 0.0;
    double secure_decoy = 0.0;
    double secure_no_decoy = 0.0;
    double secure_one_decoy = 0.0;
    double single_yield = 0.0;        // Y1 of the method reported in `secure`
    double single_gain = 0.0;         // Q1
    double single_error = 0.0;        // e1
    double omega_untagged = 0.0;
    double secure = 0.0;              // value for the requested method
    bool insecure = false;

    double secure_for(Method m) const;
};

/// Full report at one range. The signal intensity is proto.mu; the one-decoy
/// entries use proto.nu as the decoy. If the one-decoy bound has no positive
/// single-photon yield its rate is reported as 0 and flagged insecure.
KeyRateReport key_rate_report(const Link& link, const ProtocolParams& proto, double range_m,
                              Method method = Method::Decoy);

// Secure rate for one method (bits/s, floored at zero).
double secure_rate(const Link& link, const ProtocolParams& proto, double range_m, Method method);

}  // namespace uwqkd::keyrate
