#include "uwqkd/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uwqkd/errors.hpp"

namespace uwqkd::optics {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

void require_fraction(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0 || v > 1.0) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

// Diattenuating retarder with eigenaxes along p/s (the s1 axis). Both
// beam-splitter ports share this form.
MuellerMatrix splitter_port(double p, double s, double phi) {
    MuellerMatrix m;
    const double mean = 0.5 * (p + s);
    const double diff = 0.5 * (p - s);
    const double g = std::sqrt(p * s);
    m(0, 0) = mean;
    m(0, 1) = diff;
    m(1, 0) = diff;
    m(1, 1) = mean;
    m(2, 2) = g * std::cos(phi);
    m(2, 3) = -g * std::sin(phi);
    m(3, 2) = g * std::sin(phi);
    m(3, 3) = g * std::cos(phi);
    return m;
}

}  // namespace

double StokesVector::degree_of_polarization() const {
    if (s0 <= 0.0) return 0.0;
    return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3) / s0;
}

bool StokesVector::is_physical(double tol) const {
    if (s0 < -tol) return false;
    const double pol = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    return pol <= s0 * (1.0 + tol) + tol;
}

BasisState parse_basis_state(std::string_view name) {
    if (name == "H") return BasisState::H;
    if (name == "V") return BasisState::V;
    if (name == "D") return BasisState::D;
    if (name == "M") return BasisState::M;
    throw DomainError("unknown polarization state '" + std::string(name) + "' (expected H, V, D or M)");
}

std::string_view to_string(BasisState state) {
    switch (state) {
        case BasisState::H: return "H";
        case BasisState::V: return "V";
        case BasisState::D: return "D";
        case BasisState::M: return "M";
    }
    return "?";
}

StokesVector basis_state(BasisState state) {
    switch (state) {
        case BasisState::H: return {1, 1, 0, 0};
        case BasisState::V: return {1, -1, 0, 0};
        case BasisState::D: return {1, 0, 1, 0};
        case BasisState::M: return {1, 0, -1, 0};
    }
    return {};
}

MuellerMatrix MuellerMatrix::identity() {
    MuellerMatrix m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

StokesVector MuellerMatrix::operator*(const StokesVector& s) const {
    const std::array<double, 4> in{s.s0, s.s1, s.s2, s.s3};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m_[i][j] * in[j];
    return {out[0], out[1], out[2], out[3]};
}

MuellerMatrix MuellerMatrix::operator*(const MuellerMatrix& rhs) const {
    MuellerMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) acc += m_[i][k] * rhs.m_[k][j];
            r(i, j) = acc;
        }
    return r;
}

MuellerMatrix MuellerMatrix::scaled(double k) const {
    MuellerMatrix r = *this;
    for (auto& row : r.m_)
        for (auto& v : row) v *= k;
    return r;
}

MuellerMatrix polarizer_matrix(const PolarizerSpec& spec) {
    require_fraction(spec.epsilon, "polarizer epsilon");
    require_finite(spec.theta, "polarizer theta");
    const double e = spec.epsilon;
    const double e2 = e * e;
    const double c = std::cos(2.0 * spec.theta);
    const double s = std::sin(2.0 * spec.theta);

    MuellerMatrix m;
    m(0, 0) = 1.0 + e2;
    m(1, 1) = (1.0 + e2) * c * c + 2.0 * e * s * s;
    m(2, 2) = (1.0 + e2) * s * s + 2.0 * e * c * c;
    m(3, 3) = 2.0 * e;
    m(0, 1) = m(1, 0) = (1.0 - e2) * c;
    m(0, 2) = m(2, 0) = (1.0 - e2) * s;
    // Cross term of the rotated diattenuator; vanishes at multiples of 45 deg.
    m(1, 2) = m(2, 1) = (1.0 - e) * (1.0 - e) * c * s;
    return m.scaled(0.5);
}

MuellerMatrix waveplate_matrix(const WavePlateSpec& spec) {
    require_finite(spec.delta, "waveplate delta");
    require_finite(spec.theta, "waveplate theta");
    const double c = std::cos(2.0 * spec.theta);
    const double s = std::sin(2.0 * spec.theta);
    const double cd = std::cos(spec.delta);
    const double sd = std::sin(spec.delta);

    MuellerMatrix m;
    m(0, 0) = 1.0;
    m(1, 1) = c * c + cd * s * s;
    m(2, 2) = c * c * cd + s * s;
    m(3, 3) = cd;
    m(1, 2) = m(2, 1) = c * s - c * cd * s;
    m(1, 3) = -s * sd;
    m(3, 1) = s * sd;
    m(2, 3) = c * sd;
    m(3, 2) = -c * sd;
    return m;
}

namespace {

void validate(const BeamSplitterSpec& spec) {
    require_fraction(spec.tp, "bs tp");
    require_fraction(spec.ts, "bs ts");
    require_fraction(spec.rp, "bs rp");
    require_fraction(spec.rs, "bs rs");
    require_finite(spec.phi_t, "bs phi_t");
    require_finite(spec.phi_r, "bs phi_r");
    if (spec.tp + spec.rp > 1.0 + 1e-9) throw DomainError("bs tp + rp exceeds 1");
    if (spec.ts + spec.rs > 1.0 + 1e-9) throw DomainError("bs ts + rs exceeds 1");
}

}  // namespace

MuellerMatrix bs_transmit_matrix(const BeamSplitterSpec& spec) {
    validate(spec);
    return splitter_port(spec.tp, spec.ts, spec.phi_t);
}

MuellerMatrix bs_reflect_matrix(const BeamSplitterSpec& spec) {
    validate(spec);
    return splitter_port(spec.rp, spec.rs, spec.phi_r);
}

StokesVector apply(const OpticalTrain& train, const StokesVector& input) {
    if (train.elements.empty()) throw DomainError("optical train is empty");
    StokesVector s = input;
    for (const auto& m : train.elements) s = m * s;
    return s;
}

double contrast_of(const StokesVector& out, BasisState nominal) {
    if (!(out.s0 > 0.0)) throw DomainError("fully extinguished: no power reaches the analyzer");
    const bool hv = nominal == BasisState::H || nominal == BasisState::V;
    const double axis = std::abs(hv ? out.s1 : out.s2);
    return std::clamp((out.s0 - axis) / (2.0 * out.s0), 0.0, 0.5);
}

double contrast(const OpticalTrain& train, BasisState nominal) {
    const auto out = apply(train, basis_state(train.source.value_or(nominal)));
    return contrast_of(out, train.analyzer.value_or(nominal));
}

OpticalTrain default_train(BasisState nominal, const TrainErrors& e) {
    constexpr double pi = std::numbers::pi;
    OpticalTrain train;
    if (nominal == BasisState::H || nominal == BasisState::V) {
        train.path = TrainPath::HV;
        const double axis = nominal == BasisState::H ? 0.0 : pi / 2;
        const auto t = bs_transmit_matrix(e.splitter);
        train.elements = {polarizer_matrix({e.polarizer_epsilon, axis + e.tx_polarizer_angle}), t, t};
    } else {
        train.path = TrainPath::DM;
        train.source = BasisState::H;
        train.analyzer = BasisState::H;
        const double hwp = nominal == BasisState::D ? pi / 8 : -pi / 8;
        const auto r = bs_reflect_matrix(e.splitter);
        train.elements = {polarizer_matrix({e.polarizer_epsilon, e.tx_polarizer_angle}),
                          waveplate_matrix({pi + e.tx_retardance_error, hwp + e.tx_waveplate_angle}), r, r,
                          waveplate_matrix({pi + e.rx_retardance_error, hwp + e.rx_waveplate_angle})};
    }
    return train;
}

ToleranceBox ToleranceBox::ordinary() {
    constexpr double deg = std::numbers::pi / 180.0;
    ToleranceBox box;
    box.reflectance = {0.45, 0.55};
    box.reflect_phase = {7.0 * deg, 9.0 * deg};
    box.retardance_error = 2.0 * std::numbers::pi / 300.0;
    box.mount_angle_error = 5.0 / 60.0 * deg;
    box.polarizer_epsilon = 0.01;
    return box;
}

ToleranceBox ToleranceBox::optimal() {
    constexpr double deg = std::numbers::pi / 180.0;
    ToleranceBox box = ordinary();
    box.reflectance = {0.495, 0.505};
    box.reflect_phase = {-0.3 * deg, 0.3 * deg};
    return box;
}

namespace {

double path_contrast(const TrainErrors& e, BasisState a, BasisState b) {
    return 0.5 * (contrast(default_train(a, e), a) + contrast(default_train(b, e), b));
}

}  // namespace

double system_contrast(const TrainErrors& e) {
    return 0.5 * (path_contrast(e, BasisState::H, BasisState::V) +
                  path_contrast(e, BasisState::D, BasisState::M));
}

WorstCaseContrast worst_case_contrast(const ToleranceBox& box) {
    WorstCaseContrast best;
    const std::array<double, 2> sign{-1.0, 1.0};
    const double da = box.mount_angle_error;
    const double dd = box.retardance_error;

    for (double rp : box.reflectance)
        for (double rs : box.reflectance)
            for (double phi : box.reflect_phase)
                for (double s1 : sign)
                    for (double s2 : sign)
                        for (double a1 : sign)
                            for (double a2 : sign)
                                for (double a3 : sign) {
                                    TrainErrors e;
                                    e.splitter = {1.0 - rp, 1.0 - rs, rp, rs, 0.0, phi};
                                    e.polarizer_epsilon = box.polarizer_epsilon;
                                    e.tx_retardance_error = s1 * dd;
                                    e.rx_retardance_error = s2 * dd;
                                    e.tx_polarizer_angle = a1 * da;
                                    e.tx_waveplate_angle = a2 * da;
                                    e.rx_waveplate_angle = a3 * da;

                                    const double hv = path_contrast(e, BasisState::H, BasisState::V);
                                    const double dm = path_contrast(e, BasisState::D, BasisState::M);
                                    const double sys = 0.5 * (hv + dm);
                                    best.hv_path = std::max(best.hv_path, hv);
                                    best.dm_path = std::max(best.dm_path, dm);
                                    if (sys > best.system) {
                                        best.system = sys;
                                        best.argmax = e;
                                    }
                                }
    return best;
}

}  // namespace uwqkd::optics
