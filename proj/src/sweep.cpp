#include "uwqkd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "uwqkd/errors.hpp"

namespace uwqkd::sweep {

Variable parse_variable(std::string_view s) {
    if (s == "distance") return Variable::Distance;
    if (s == "fov") return Variable::Fov;
    if (s == "aperture") return Variable::Aperture;
    throw DomainError("unknown sweep variable '" + std::string(s) + "'");
}

std::string_view to_string(Variable v) {
    switch (v) {
        case Variable::Distance: return "distance";
        case Variable::Fov: return "fov";
        case Variable::Aperture: return "aperture";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (!(std::isfinite(from) && std::isfinite(to) && from < to)) throw DomainError("sweep requires from < to");
    if (steps < 2) throw DomainError("sweep requires at least 2 steps");
    if (!(outputs.qber || outputs.sifted || outputs.secure)) throw DomainError("sweep has no outputs selected");
    fixed.validate();
    protocol.validate();
}

std::vector<double> grid(double from, double to, int steps) {
    if (steps < 2) throw DomainError("grid requires at least 2 steps");
    std::vector<double> xs(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) xs[i] = from + (to - from) * static_cast<double>(i) / (steps - 1);
    xs.back() = to;
    return xs;
}

namespace {

SweepRow evaluate(const SweepSpec& spec, double x) {
    SweepRow row;
    row.x = x;
    try {
        Link link = spec.fixed;
        double range = spec.fixed_range_m;
        switch (spec.variable) {
            case Variable::Distance: range = x; break;
            case Variable::Fov: link.geometry.fov_rad = x * 1e-3; break;
            case Variable::Aperture: link.geometry.aperture_m2 = x * 1e-4; break;
        }
        link.geometry.validate();
        if (spec.outputs.qber) {
            const auto rates = qber::rates(link, range, spec.formula);
            row.qber = qber::decompose(rates, link.system);
            row.radiance_clamped = rates.radiance_clamped;
        }
        if (spec.outputs.sifted) row.sifted_bps = keyrate::sifted_rate(link, spec.protocol, range);
        if (spec.outputs.secure)
            row.secure_bps = keyrate::secure_rate(link, spec.protocol, range, spec.secure_method);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    spec.validate();
    const auto xs = grid(spec.from, spec.to, spec.steps);
    std::vector<SweepRow> rows(xs.size());

    unsigned workers = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(xs.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < xs.size(); i = next++) rows[i] = evaluate(spec, xs[i]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    return rows;
}

io::CsvTable sweep_table(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    using io::format_number;
    io::CsvTable table;
    switch (spec.variable) {
        case Variable::Distance: table.header.push_back("r_m"); break;
        case Variable::Fov: table.header.push_back("fov_mrad"); break;
        case Variable::Aperture: table.header.push_back("aperture_cm2"); break;
    }
    if (spec.outputs.qber)
        for (const char* c : {"q_opt", "q_dc", "q_bac", "q_scatter", "q_total"}) table.header.emplace_back(c);
    if (spec.outputs.sifted) table.header.emplace_back("sifted_bps");
    if (spec.outputs.secure) table.header.emplace_back("secure_bps");
    const bool any_error = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
    if (any_error) table.header.emplace_back("error");

    for (const auto& r : rows) {
        std::vector<std::string> cells{format_number(r.x)};
        const bool ok = r.error.empty();
        auto cell = [&](double v) { cells.push_back(ok ? format_number(v) : ""); };
        if (spec.outputs.qber) {
            cell(r.qber.optical);
            cell(r.qber.dark);
            cell(r.qber.background);
            cell(r.qber.scatter);
            cell(r.qber.total());
        }
        if (spec.outputs.sifted) cell(r.sifted_bps);
        if (spec.outputs.secure) cell(r.secure_bps);
        if (any_error) cells.push_back(r.error);
        table.add_row(std::move(cells));
    }
    return table;
}

void MaxDistanceQuery::validate() const {
    if (criterion == Criterion::QberThreshold && !(threshold > 0.0 && threshold < 0.5))
        throw DomainError("QBER threshold must lie in (0, 0.5)");
    if (!(tolerance_m > 0.0)) throw DomainError("tolerance must be positive");
    if (!(cap_m > 0.0)) throw DomainError("cap must be positive");
}

bool satisfies(const MaxDistanceQuery& query, const Link& link, const ProtocolParams& proto, double range_m) {
    if (query.criterion == Criterion::QberThreshold)
        return qber::qber(link, range_m, query.formula).total() < query.threshold;
    return keyrate::secure_rate(link, proto, range_m, query.method) > 0.0;
}

MaxDistanceResult max_secure_distance(const MaxDistanceQuery& query, const Link& link, const ProtocolParams& proto) {
    query.validate();
    auto ok = [&](double r) { return satisfies(query, link, proto, r); };

    if (!ok(0.0)) throw InfeasibleError("infeasible at zero range");

    double lo = 0.0;
    double hi = -1.0;
    for (double r = 1.0;; r *= 2.0) {
        const double probe = std::min(r, query.cap_m);
        if (!ok(probe)) {
            hi = probe;
            break;
        }
        lo = probe;
        if (probe >= query.cap_m) break;
    }
    if (hi < 0.0) throw InfeasibleError("exceeds cap: criterion holds up to " + std::to_string(query.cap_m) + " m");

    MaxDistanceResult result;
    result.bracket_lo = lo;
    result.bracket_hi = hi;

    // Verify a single crossing inside the bracket before bisecting.
    constexpr int kSamples = 64;
    int changes = 0;
    bool prev = true;
    double first_lo = lo;
    double first_hi = hi;
    bool found = false;
    for (int i = 1; i <= kSamples; ++i) {
        const double x = lo + (hi - lo) * i / kSamples;
        const bool cur = i == kSamples ? false : ok(x);
        if (cur != prev) {
            ++changes;
            if (!found && !cur) {
                first_lo = lo + (hi - lo) * (i - 1) / kSamples;
                first_hi = x;
                found = true;
            }
        }
        prev = cur;
    }
    result.non_monotone = changes > 1;
    lo = first_lo;
    hi = first_hi;

    while (hi - lo > query.tolerance_m) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    result.distance_m = lo;
    return result;
}

}  // namespace uwqkd::sweep
