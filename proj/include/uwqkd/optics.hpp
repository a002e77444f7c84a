#pragma once

/**
 * Stokes/Mueller calculus for the BB84 transmitter and receiver optical trains.
 *
 * Matrices act on column Stokes vectors (s0, s1, s2, s3), s0 being total power.
 * An OpticalTrain lists its elements in the order light meets them, so the first
 * element acts first.
 */

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uwqkd::optics {

struct StokesVector {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    // Degree of polarization; 0 for a dark beam.
    double degree_of_polarization() const;
    bool is_physical(double tol = 1e-12) const;

    StokesVector scaled(double k) const { return {k * s0, k * s1, k * s2, k * s3}; }
};

enum class BasisState { H, V, D, M };

BasisState parse_basis_state(std::string_view name);
std::string_view to_string(BasisState state);

// Unit-power, fully polarized Stokes vector of a BB84 state.
StokesVector basis_state(BasisState state);

class MuellerMatrix {
public:
    using Rows = std::array<std::array<double, 4>, 4>;

    MuellerMatrix() = default;
    explicit MuellerMatrix(const Rows& rows) : m_(rows) {}

    static MuellerMatrix identity();

    // Zero-based indices; m(0,0) is M11.
    double operator()(int row, int col) const { return m_[row][col]; }
    double& operator()(int row, int col) { return m_[row][col]; }

    const Rows& rows() const { return m_; }

    StokesVector operator*(const StokesVector& s) const;
    MuellerMatrix operator*(const MuellerMatrix& rhs) const;
    MuellerMatrix scaled(double k) const;

    friend bool operator==(const MuellerMatrix&, const MuellerMatrix&) = default;

private:
    Rows m_{};
};

struct PolarizerSpec {
    double epsilon = 0.0;  // amplitude extinction; power extinction ratio is epsilon^2
    double theta = 0.0;    // transmission axis, rad
};

struct WavePlateSpec {
    double delta = 0.0;  // retardance, rad
    double theta = 0.0;  // fast axis, rad
};

struct BeamSplitterSpec {
    double tp = 0.5;
    double ts = 0.5;
    double rp = 0.5;
    double rs = 0.5;
    double phi_t = 0.0;  // p/s phase difference on transmission, rad
    double phi_r = 0.0;  // p/s phase difference on reflection, rad
};

// Passive polarizer; normalized so that an ideal polarizer transmits at most
// the incident power.
MuellerMatrix polarizer_matrix(const PolarizerSpec& spec);
MuellerMatrix waveplate_matrix(const WavePlateSpec& spec);
MuellerMatrix bs_transmit_matrix(const BeamSplitterSpec& spec);
MuellerMatrix bs_reflect_matrix(const BeamSplitterSpec& spec);

enum class TrainPath { HV, DM };

struct OpticalTrain {
    std::vector<MuellerMatrix> elements;
    TrainPath path = TrainPath::HV;
    // State fed into the first element and axis the output is analyzed
    // against; both default to the nominal state passed to `contrast`.
    std::optional<BasisState> source;
    std::optional<BasisState> analyzer;
};

StokesVector apply(const OpticalTrain& train, const StokesVector& input);

// Fraction of the analyzed power that lands in the port orthogonal to `nominal`.
// Throws DomainError when the train extinguishes the beam.
double contrast(const OpticalTrain& train, BasisState nominal);

// Contrast of an already propagated Stokes vector against a nominal axis.
double contrast_of(const StokesVector& out, BasisState nominal);

/// Imperfections of one transmitter/receiver build. The same beam-splitter
/// coating is used at both ends; each polarizer and half-wave plate carries its
/// own mount-angle and retardance error.
struct TrainErrors {
    BeamSplitterSpec splitter;
    double polarizer_epsilon = 0.01;
    double tx_polarizer_angle = 0.0;
    double tx_waveplate_angle = 0.0;
    double rx_waveplate_angle = 0.0;
    double tx_retardance_error = 0.0;
    double rx_retardance_error = 0.0;
};

/// Default chains. HV: P1(H/V) -> BS_t(tx) -> BS_t(rx), analyzed along the
/// nominal axis. DM: laser H -> P1(H) -> HWP1(+-22.5 deg) -> BS_r(tx) -> BS_r(rx)
/// -> HWP2(+-22.5 deg), analyzed along H. The receiver polarizer is the
/// analyzer and is represented by the analysis axis, not by a matrix.
OpticalTrain default_train(BasisState nominal, const TrainErrors& errors);

/// Tolerance box over which the worst-case contrast is searched. Each entry is
/// the pair of extremes to try.
struct ToleranceBox {
    std::array<double, 2> reflectance;       // r_p and r_s independently
    std::array<double, 2> reflect_phase;     // phi_r, rad
    double retardance_error = 0.0;           // |delta - pi| for each HWP
    double mount_angle_error = 0.0;          // |theta offset| on each polarizer/HWP
    double polarizer_epsilon = 0.01;

    static ToleranceBox ordinary();
    static ToleranceBox optimal();
};

struct WorstCaseContrast {
    double system = 0.0;    // max over the box of the four-state mean contrast
    double dm_path = 0.0;   // max over the box of the D/M contrast alone
    double hv_path = 0.0;   // max over the box of the H/V contrast alone
    TrainErrors argmax;     // errors attaining `system`
};

// Mean contrast over H, V, D, M for one build.
double system_contrast(const TrainErrors& errors);

WorstCaseContrast worst_case_contrast(const ToleranceBox& box);

}  // namespace uwqkd::optics
