#pragma once

namespace uwqkd {

/// Transmitter/receiver hardware parameters. Rates are per second; the bit
/// period is 1 / pulse_rate_hz.
struct SystemParams {
    double contrast = 0.017;            // polarization contrast P
    double mean_photon_number = 0.1;    // mu
    double detector_efficiency = 0.2;   // eta
    double optics_transmittance = 0.95; // eta_opt
    double pulse_rate_hz = 40e6;        // f
    double gate_time_s = 5e-9;          // detection window
    double dark_count_rate = 100.0;     // per detector, counts/s
    double wavelength_m = 480e-9;
    double filter_bandwidth_nm = 1.0;
    double scatter_rate = 0.0;          // scattered photons reaching the detector, counts/s
    double scatter_error_prob = 0.0;

    double bit_period() const { return 1.0 / pulse_rate_hz; }
    void validate() const;
};

struct ProtocolParams {
    double sifting = 1.0;      // q
    double ec_efficiency = 1.0; // f(E_mu) >= 1
    double mu = 0.1;           // signal intensity used for key rates
    double nu = 0.05;          // decoy intensity (one-decoy estimator)

    void validate() const;
};

}  // namespace uwqkd
