#include "uwqkd/figures.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>

#include "uwqkd/config.hpp"
#include "uwqkd/errors.hpp"
#include "uwqkd/sweep.hpp"

namespace uwqkd::figures {

namespace {

using channel::PropagationMode;

constexpr std::array kModes{PropagationMode::Downward, PropagationMode::Upward, PropagationMode::Horizontal};

struct Panel {
    const char* hardware;  // preset name
    double attenuation;
    sweep::Variable variable;
    double from;
    double to;
    int steps;
};

struct Figure {
    std::vector<Panel> panels;
    sweep::Outputs outputs;
    bool no_decoy_column = false;
};

Figure figure(std::string_view name) {
    using sweep::Variable;
    if (name == "fig3")
        return {{{"ordinary", 0.03, Variable::Fov, 0.0, 40.0, 41},
                 {"ordinary", 0.03, Variable::Aperture, 0.0, 100.0, 21}},
                {true, false, false}};
    if (name == "fig4")
        return {{{"ordinary", 0.03, Variable::Distance, 0.0, 400.0, 81},
                 {"optimal", 0.03, Variable::Distance, 0.0, 400.0, 81}},
                {true, false, false}};
    if (name == "fig5")
        return {{{"ordinary", 0.03, Variable::Distance, 0.0, 400.0, 81},
                 {"ordinary", 0.18, Variable::Distance, 0.0, 80.0, 81}},
                {true, false, false}};
    if (name == "fig6")
        return {{{"optimal", 0.03, Variable::Distance, 0.0, 500.0, 101},
                 {"optimal", 0.18, Variable::Distance, 0.0, 100.0, 101}},
                {true, false, false}};
    if (name == "fig7")
        return {{{"ordinary", 0.03, Variable::Distance, 0.0, 400.0, 81},
                 {"optimal", 0.03, Variable::Distance, 0.0, 400.0, 81}},
                {false, true, false}};
    if (name == "fig8")
        return {{{"ordinary", 0.03, Variable::Distance, 0.0, 300.0, 61},
                 {"optimal", 0.03, Variable::Distance, 0.0, 450.0, 91}},
                {false, true, true},
                true};
    throw DomainError("unknown figure '" + std::string(name) + "' (expected fig3..fig8)");
}

}  // namespace

const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
    return n;
}

io::CsvTable build(std::string_view name, const std::optional<std::string>& radiance_path) {
    const auto fig = figure(name);
    io::CsvTable out;
    bool header_done = false;

    for (const auto& panel : fig.panels) {
        auto cfg = io::preset(panel.hardware);
        const auto table = io::resolve_radiance(cfg, radiance_path);
        for (auto mode : kModes) {
            cfg.channel = channel::make_scenario(mode, panel.attenuation,
                                                 panel.attenuation > 0.1 ? channel::WaterType::JerlovII
                                                                         : channel::WaterType::JerlovI);
            sweep::SweepSpec spec;
            spec.variable = panel.variable;
            spec.from = panel.from;
            spec.to = panel.to;
            spec.steps = panel.steps;
            spec.fixed = io::make_link(cfg, table);
            spec.protocol = cfg.protocol;
            spec.outputs = fig.outputs;
            const auto rows = sweep::sweep(spec);
            auto part = sweep::sweep_table(spec, rows);

            std::vector<std::string> extra;
            if (fig.no_decoy_column) {
                spec.secure_method = keyrate::Method::NoDecoy;
                spec.outputs = {false, false, true};
                for (const auto& r : sweep::sweep(spec)) extra.push_back(io::format_number(r.secure_bps));
            }

            if (!header_done) {
                out.header = {"case", "chi_c", "mode"};
                out.header.insert(out.header.end(), part.header.begin(), part.header.end());
                if (fig.no_decoy_column) {
                    std::replace(out.header.begin(), out.header.end(), std::string("secure_bps"),
                                 std::string("secure_decoy_bps"));
                    out.header.emplace_back("secure_nodecoy_bps");
                }
                header_done = true;
            }
            for (std::size_t i = 0; i < part.rows.size(); ++i) {
                std::vector<std::string> cells{panel.hardware, io::format_number(panel.attenuation),
                                               std::string(channel::to_string(mode))};
                cells.insert(cells.end(), part.rows[i].begin(), part.rows[i].end());
                if (fig.no_decoy_column) cells.push_back(extra[i]);
                cells.resize(out.header.size());
                out.rows.push_back(std::move(cells));
            }
            // fig3 mixes two x variables in one table: tag the case with the
            // variable and use a neutral x header.
            if (name == "fig3") {
                out.header[3] = "x";
                for (std::size_t i = out.rows.size() - part.rows.size(); i < out.rows.size(); ++i)
                    out.rows[i][0] = std::string(panel.hardware) + ":" + std::string(sweep::to_string(panel.variable));
            }
        }
    }
    return out;
}

std::string plot_script(std::string_view name, const std::string& csv_file) {
    std::string y;
    if (name == "fig3" || name == "fig5" || name == "fig6") y = "['q_total']";
    if (name == "fig4") y = "['q_opt', 'q_dc', 'q_bac']";
    if (name == "fig7") y = "['sifted_bps']";
    if (name == "fig8") y = "['secure_decoy_bps', 'secure_nodecoy_bps']";
    const bool log_y = name != "fig3";

    std::string s;
    s += "# Plots " + std::string(name) + " from " + csv_file + "\n";
    s += "import csv\nimport os\nfrom collections import defaultdict\n\nimport matplotlib\n";
    s += "matplotlib.use('Agg')\nimport matplotlib.pyplot as plt\n\n";
    s += "here = os.path.dirname(os.path.abspath(__file__))\n";
    s += "with open(os.path.join(here, '" + csv_file + "')) as fh:\n    rows = list(csv.DictReader(fh))\n\n";
    s += "xcol = [c for c in rows[0].keys() if c not in ('case', 'chi_c', 'mode')][0]\n";
    s += "ycols = " + y + "\n";
    s += "groups = defaultdict(list)\nfor r in rows:\n    groups[(r['case'], r['chi_c'])].append(r)\n\n";
    s += "fig, axes = plt.subplots(1, len(groups), figsize=(6 * len(groups), 4.5), squeeze=False)\n";
    s += "for ax, ((case, chi), rs) in zip(axes[0], sorted(groups.items())):\n";
    s += "    for mode in ('downward', 'upward', 'horizontal'):\n";
    s += "        sel = [r for r in rs if r['mode'] == mode and r[ycols[0]] != '']\n";
    s += "        for y in ycols:\n";
    s += "            ax.plot([float(r[xcol]) for r in sel], [float(r[y]) for r in sel], label=f'{mode} {y}')\n";
    s += "    ax.set_title(f'{case}, chi_c={chi}/m')\n    ax.set_xlabel(xcol)\n";
    if (log_y) s += "    ax.set_yscale('log')\n";
    s += "    ax.legend(fontsize=7)\n\n";
    s += "fig.tight_layout()\nfig.savefig(os.path.join(here, '" + std::string(name) + ".png'), dpi=120)\n";
    return s;
}

Written reproduce(std::string_view name, const std::string& out_dir, const std::optional<std::string>& radiance_path) {
    const auto table = build(name, radiance_path);
    std::filesystem::create_directories(out_dir);
    const std::string csv_name = std::string(name) + ".csv";
    Written w;
    w.csv_path = (std::filesystem::path(out_dir) / csv_name).string();
    w.script_path = (std::filesystem::path(out_dir) / (std::string(name) + "_plot.py")).string();
    io::emit_csv(table, w.csv_path);
    std::ofstream script(w.script_path, std::ios::binary | std::ios::trunc);
    if (!script) throw std::runtime_error("cannot open '" + w.script_path + "' for writing");
    script << plot_script(name, csv_name);
    return w;
}

}  // namespace uwqkd::figures
