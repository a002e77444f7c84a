#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uwqkd/csv.hpp"
#include "uwqkd/keyrate.hpp"
#include "uwqkd/qber.hpp"

namespace uwqkd::sweep {

enum class Variable { Distance, Fov, Aperture };

Variable parse_variable(std::string_view s);
std::string_view to_string(Variable v);

struct Outputs {
    bool qber = true;
    bool sifted = false;
    bool secure = false;
};

/// Grid units follow the CLI: distance in m, FOV in mrad, aperture in cm^2.
struct SweepSpec {
    Variable variable = Variable::Distance;
    double from = 0.0;
    double to = 300.0;
    int steps = 31;
    Link fixed;
    ProtocolParams protocol;
    double fixed_range_m = 100.0;  // range used by FOV and aperture sweeps
    Outputs outputs;
    qber::Formula formula = qber::Formula::Modified;
    keyrate::Method secure_method = keyrate::Method::Decoy;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

struct SweepRow {
    double x = 0.0;
    qber::QberBreakdown qber;
    double sifted_bps = 0.0;
    double secure_bps = 0.0;
    bool radiance_clamped = false;
    std::string error;  // non-empty when this grid point failed
};

// Evenly spaced points; the first and last are exactly `from` and `to`.
std::vector<double> grid(double from, double to, int steps);

/// Evaluates every grid point. Rows may be computed concurrently but are
/// returned in grid order; a failure is recorded on its row and the sweep
/// continues.
std::vector<SweepRow> sweep(const SweepSpec& spec);

// Header depends on the selected outputs; an `error` column is appended only
// when some row failed.
io::CsvTable sweep_table(const SweepSpec& spec, const std::vector<SweepRow>& rows);

enum class Criterion { QberThreshold, PositiveSecureRate };

struct MaxDistanceQuery {
    Criterion criterion = Criterion::QberThreshold;
    double threshold = 0.11;
    double tolerance_m = 0.1;
    double cap_m = 1000.0;
    qber::Formula formula = qber::Formula::Modified;
    keyrate::Method method = keyrate::Method::Decoy;

    void validate() const;
};

struct MaxDistanceResult {
    double distance_m = 0.0;  // largest range found to satisfy the criterion
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool non_monotone = false;  // more than one crossing seen inside the bracket
};

// True when the link is secure at `range_m` under the query's criterion.
bool satisfies(const MaxDistanceQuery& query, const Link& link, const ProtocolParams& proto, double range_m);

/// Throws InfeasibleError("infeasible at zero range") or
/// InfeasibleError("exceeds cap").
MaxDistanceResult max_secure_distance(const MaxDistanceQuery& query, const Link& link, const ProtocolParams& proto);

}  // namespace uwqkd::sweep
