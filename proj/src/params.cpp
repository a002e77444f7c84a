#include "uwqkd/params.hpp"

#include <cmath>
#include <string>

#include "uwqkd/errors.hpp"

namespace uwqkd {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void SystemParams::validate() const {
    require(finite_nonneg(contrast) && contrast <= 0.5, "contrast P must lie in [0, 0.5]");
    require(std::isfinite(mean_photon_number) && mean_photon_number > 0.0, "mean photon number must be positive");
    require(detector_efficiency > 0.0 && detector_efficiency <= 1.0, "detector efficiency must lie in (0, 1]");
    require(optics_transmittance > 0.0 && optics_transmittance <= 1.0, "optics transmittance must lie in (0, 1]");
    require(std::isfinite(pulse_rate_hz) && pulse_rate_hz > 0.0, "pulse rate must be positive");
    require(finite_nonneg(gate_time_s), "gate time must be non-negative");
    require(finite_nonneg(dark_count_rate), "dark count rate must be non-negative");
    require(std::isfinite(wavelength_m) && wavelength_m > 0.0, "wavelength must be positive");
    require(finite_nonneg(filter_bandwidth_nm), "filter bandwidth must be non-negative");
    require(finite_nonneg(scatter_rate), "scatter rate must be non-negative");
    require(finite_nonneg(scatter_error_prob) && scatter_error_prob <= 1.0, "scatter error probability must lie in [0, 1]");
}

void ProtocolParams::validate() const {
    require(sifting > 0.0 && sifting <= 1.0, "sifting factor q must lie in (0, 1]");
    require(std::isfinite(ec_efficiency) && ec_efficiency >= 1.0, "error-correction efficiency must be >= 1");
    require(std::isfinite(mu) && mu > 0.0, "signal intensity mu must be positive");
    require(std::isfinite(nu) && nu > 0.0 && nu < mu, "decoy intensity must satisfy 0 < nu < mu");
}

}  // namespace uwqkd
