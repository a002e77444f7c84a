// Command-line front end: contrast, qber, keyrate, sweep, max-distance, reproduce.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uwqkd/config.hpp"
#include "uwqkd/csv.hpp"
#include "uwqkd/errors.hpp"
#include "uwqkd/figures.hpp"
#include "uwqkd/keyrate.hpp"
#include "uwqkd/optics.hpp"
#include "uwqkd/qber.hpp"
#include "uwqkd/sweep.hpp"
#include "uwqkd/train_file.hpp"

namespace {

using namespace uwqkd;
using io::format_number;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kInfeasible = 3, kTableGap = 4 };

struct LinkOptions {
    std::string config_path;
    std::string preset = "ordinary";
    std::string radiance_path;
    std::string mode;
    std::optional<double> chi_c;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Configuration file");
        cmd->add_option("--preset", preset, "Hardware preset when no --config is given")
            ->check(CLI::IsMember({"ordinary", "optimal"}));
        cmd->add_option("--radiance", radiance_path, "Radiance CSV replacing the bundled table");
        cmd->add_option("--mode", mode, "Override propagation mode (upward|downward|horizontal)");
        cmd->add_option("--chi-c", chi_c, "Override beam attenuation coefficient, 1/m");
    }

    io::Config config() const {
        auto cfg = config_path.empty() ? io::preset(preset) : io::load_config(config_path);
        if (!mode.empty()) {
            const auto m = channel::parse_mode(mode);
            if (m != cfg.channel.mode) {
                cfg.channel.mode = m;
                cfg.channel.rx_fixed_depth_m = channel::default_rx_depth(m);
            }
        }
        if (chi_c) cfg.channel.attenuation = *chi_c;
        cfg.channel.validate();
        return cfg;
    }

    Link link() const {
        const auto cfg = config();
        std::optional<std::string> path;
        if (!radiance_path.empty()) path = radiance_path;
        return io::make_link(cfg, io::resolve_radiance(cfg, path));
    }
};

void write(const io::CsvTable& table, const std::string& out) {
    if (out.empty() || out == "-")
        std::cout << io::to_csv(table);
    else
        io::emit_csv(table, out);
}

int run_contrast(const std::string& train_path, const std::string& state, const std::string& box) {
    if (!box.empty()) {
        const auto tb = box == "optimal" ? optics::ToleranceBox::optimal() : optics::ToleranceBox::ordinary();
        const auto wc = optics::worst_case_contrast(tb);
        io::CsvTable t{{"box", "system", "dm_path", "hv_path"}, {}};
        t.add_row({box, format_number(wc.system), format_number(wc.dm_path), format_number(wc.hv_path)});
        std::cout << io::to_csv(t);
        return kOk;
    }
    if (train_path.empty() || state.empty()) throw ConfigError("contrast needs --train and --state, or --box");
    const auto train = io::load_train(train_path);
    const auto s = optics::parse_basis_state(state);
    const auto out = optics::apply(train, optics::basis_state(train.source.value_or(s)));
    io::CsvTable t{{"state", "s0", "s1", "s2", "s3", "contrast"}, {}};
    t.add_row({std::string(optics::to_string(s)), format_number(out.s0), format_number(out.s1),
               format_number(out.s2), format_number(out.s3), format_number(optics::contrast_of(out, train.analyzer.value_or(s)))});
    std::cout << io::to_csv(t);
    return kOk;
}

int run_qber(const LinkOptions& lo, double distance, bool legacy, const std::string& out) {
    const auto link = lo.link();
    const auto q = qber::qber(link, distance, legacy ? qber::Formula::Legacy : qber::Formula::Modified);
    io::CsvTable t{{"r_m", "q_opt", "q_dc", "q_bac", "q_scatter", "q_total"}, {}};
    t.add_row({format_number(distance), format_number(q.optical), format_number(q.dark), format_number(q.background),
               format_number(q.scatter), format_number(q.total())});
    write(t, out);
    if (qber::link_radiance(link, distance).clamped)
        std::cerr << "warning: receiver depth outside the radiance table; value clamped\n";
    return kOk;
}

int run_keyrate(const LinkOptions& lo, double distance, const std::string& method_name, const std::string& out) {
    const auto cfg = lo.config();
    const auto link = lo.link();
    const auto method = keyrate::parse_method(method_name);
    const auto rep = keyrate::key_rate_report(link, cfg.protocol, distance, method);
    io::CsvTable t{{"r_m", "sifted_bps", "secure_bps", "Y1", "Q1", "e1", "omega_untagged", "insecure_flag"}, {}};
    t.add_row({format_number(distance), format_number(rep.sifted), format_number(rep.secure),
               format_number(rep.single_yield), format_number(rep.single_gain), format_number(rep.single_error),
               format_number(rep.omega_untagged), rep.insecure ? "1" : "0"});
    write(t, out);
    return kOk;
}

struct SweepOptions {
    std::string var = "distance";
    double from = 0.0;
    double to = 300.0;
    int steps = 31;
    std::string out;
    std::string method = "decoy";
    double range = 100.0;
    bool legacy = false;
    unsigned threads = 0;
};

int run_sweep(const LinkOptions& lo, const SweepOptions& so) {
    sweep::SweepSpec spec;
    spec.variable = sweep::parse_variable(so.var);
    spec.from = so.from;
    spec.to = so.to;
    spec.steps = so.steps;
    spec.fixed = lo.link();
    spec.protocol = lo.config().protocol;
    spec.fixed_range_m = so.range;
    spec.outputs = {true, true, true};
    spec.formula = so.legacy ? qber::Formula::Legacy : qber::Formula::Modified;
    spec.secure_method = keyrate::parse_method(so.method);
    spec.threads = so.threads;
    const auto rows = sweep::sweep(spec);
    write(sweep::sweep_table(spec, rows), so.out);
    int failed = 0;
    for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
    if (failed) std::cerr << "warning: " << failed << " grid point(s) failed; see the error column\n";
    return kOk;
}

int run_max_distance(const LinkOptions& lo, const std::string& criterion, double threshold, const std::string& method,
                     bool legacy, double cap, double tolerance) {
    sweep::MaxDistanceQuery q;
    if (criterion == "qber")
        q.criterion = sweep::Criterion::QberThreshold;
    else if (criterion == "rate")
        q.criterion = sweep::Criterion::PositiveSecureRate;
    else
        throw ConfigError("criterion must be qber or rate");
    q.threshold = threshold;
    q.method = keyrate::parse_method(method);
    q.formula = legacy ? qber::Formula::Legacy : qber::Formula::Modified;
    q.cap_m = cap;
    q.tolerance_m = tolerance;
    const auto res = sweep::max_secure_distance(q, lo.link(), lo.config().protocol);
    io::CsvTable t{{"criterion", "distance_m", "bracket_lo", "bracket_hi", "non_monotone"}, {}};
    t.add_row({criterion, format_number(res.distance_m), format_number(res.bracket_lo), format_number(res.bracket_hi),
               res.non_monotone ? "1" : "0"});
    std::cout << io::to_csv(t);
    if (res.non_monotone) std::cerr << "warning: criterion changes more than once inside the bracket\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater BB84 link simulator"};
    app.require_subcommand(1);

    std::string train, state, box;
    auto* contrast = app.add_subcommand("contrast", "Polarization contrast of an optical train");
    contrast->add_option("--train", train, "Optical-train file");
    contrast->add_option("--state", state, "Input state H|V|D|M");
    contrast->add_option("--box", box, "Worst case over a tolerance box instead of a train file")
        ->check(CLI::IsMember({"ordinary", "optimal"}));

    LinkOptions qlo;
    double qdist = 0.0;
    bool qlegacy = false;
    std::string qout;
    auto* qcmd = app.add_subcommand("qber", "QBER components at one range");
    qlo.attach(qcmd);
    qcmd->add_option("--distance", qdist, "Range, m")->required();
    qcmd->add_flag("--legacy", qlegacy, "Use the legacy QBER expression");
    qcmd->add_option("--out", qout, "CSV output path (default stdout)");

    LinkOptions klo;
    double kdist = 0.0;
    std::string kmethod = "decoy", kout;
    auto* kcmd = app.add_subcommand("keyrate", "Sifted and secure key rates at one range");
    klo.attach(kcmd);
    kcmd->add_option("--distance", kdist, "Range, m")->required();
    kcmd->add_option("--method", kmethod, "sifted|decoy|nodecoy|onedecoy");
    kcmd->add_option("--out", kout, "CSV output path (default stdout)");

    LinkOptions slo;
    SweepOptions so;
    auto* scmd = app.add_subcommand("sweep", "Sweep range, FOV (mrad) or aperture (cm^2)");
    slo.attach(scmd);
    scmd->add_option("--var", so.var, "distance|fov|aperture");
    scmd->add_option("--from", so.from);
    scmd->add_option("--to", so.to);
    scmd->add_option("--steps", so.steps)->check(CLI::PositiveNumber);
    scmd->add_option("--out", so.out, "CSV output path (default stdout)");
    scmd->add_option("--method", so.method, "Secure-rate method");
    scmd->add_option("--range", so.range, "Fixed range for fov/aperture sweeps, m");
    scmd->add_flag("--legacy", so.legacy, "Use the legacy QBER expression");
    scmd->add_option("--threads", so.threads, "Worker threads (0: all cores)");

    LinkOptions mlo;
    std::string criterion = "qber", mmethod = "decoy";
    double threshold = 0.11, cap = 1000.0, tol = 0.1;
    bool mlegacy = false;
    auto* mcmd = app.add_subcommand("max-distance", "Largest range meeting a security criterion");
    mlo.attach(mcmd);
    mcmd->add_option("--criterion", criterion, "qber|rate");
    mcmd->add_option("--threshold", threshold, "QBER threshold");
    mcmd->add_option("--method", mmethod, "Secure-rate method for --criterion rate");
    mcmd->add_flag("--legacy", mlegacy, "Use the legacy QBER expression");
    mcmd->add_option("--cap", cap, "Search cap, m");
    mcmd->add_option("--tolerance", tol, "Bisection tolerance, m");

    LinkOptions tlo;
    std::string table_out;
    auto* tcmd = app.add_subcommand("radiance", "Write the radiance table in use as CSV");
    tlo.attach(tcmd);
    tcmd->add_option("--out", table_out, "CSV output path (default stdout)");

    std::string fig, out_dir = "figures", fig_radiance;
    auto* rcmd = app.add_subcommand("reproduce", "Canonical figure sweeps: CSV plus plot script");
    rcmd->add_option("figure", fig, "fig3..fig8")->required();
    rcmd->add_option("--out-dir", out_dir, "Output directory");
    rcmd->add_option("--radiance", fig_radiance, "Radiance CSV replacing the bundled table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*contrast) return run_contrast(train, state, box);
        if (*qcmd) return run_qber(qlo, qdist, qlegacy, qout);
        if (*kcmd) return run_keyrate(klo, kdist, kmethod, kout);
        if (*scmd) return run_sweep(slo, so);
        if (*mcmd) return run_max_distance(mlo, criterion, threshold, mmethod, mlegacy, cap, tol);
        if (*tcmd) {
            const auto text = channel::radiance_csv(*tlo.link().radiance);
            if (table_out.empty() || table_out == "-") {
                std::cout << text;
            } else {
                std::ofstream f(table_out, std::ios::binary | std::ios::trunc);
                if (!(f << text)) throw std::runtime_error("cannot write '" + table_out + "'");
            }
            return kOk;
        }
        if (*rcmd) {
            std::optional<std::string> rp;
            if (!fig_radiance.empty()) rp = fig_radiance;
            const auto w = figures::reproduce(fig, out_dir, rp);
            std::cout << w.csv_path << "\n" << w.script_path << "\n";
            return kOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kInfeasible;
    } catch (const TableGapError& e) {
        std::cerr << "radiance table gap: " << e.what() << "\n";
        return kTableGap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
