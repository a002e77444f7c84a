#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uwqkd/config.hpp"
#include "uwqkd/csv.hpp"
#include "uwqkd/errors.hpp"
#include "uwqkd/figures.hpp"
#include "uwqkd/keyrate.hpp"
#include "uwqkd/optics.hpp"
#include "uwqkd/qber.hpp"
#include "uwqkd/sweep.hpp"
#include "uwqkd/train_file.hpp"

namespace py = pybind11;
using namespace uwqkd;

namespace {

qber::Formula formula(bool legacy) { return legacy ? qber::Formula::Legacy : qber::Formula::Modified; }

py::dict as_dict(const qber::QberBreakdown& q) {
    py::dict d;
    d["q_opt"] = q.optical;
    d["q_dc"] = q.dark;
    d["q_bac"] = q.background;
    d["q_scatter"] = q.scatter;
    d["q_total"] = q.total();
    return d;
}

py::list as_list(const optics::MuellerMatrix& m) {
    py::list rows;
    for (const auto& r : m.rows()) rows.append(py::make_tuple(r[0], r[1], r[2], r[3]));
    return rows;
}

std::array<double, 4> as_array(const optics::StokesVector& s) { return {s.s0, s.s1, s.s2, s.s3}; }

}  // namespace

PYBIND11_MODULE(_uwqkd, m) {
    m.doc() = "Underwater BB84 link model";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<TableGapError>(m, "TableGapError", PyExc_LookupError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("contrast", &SystemParams::contrast)
        .def_readwrite("mean_photon_number", &SystemParams::mean_photon_number)
        .def_readwrite("detector_efficiency", &SystemParams::detector_efficiency)
        .def_readwrite("optics_transmittance", &SystemParams::optics_transmittance)
        .def_readwrite("pulse_rate_hz", &SystemParams::pulse_rate_hz)
        .def_readwrite("gate_time_s", &SystemParams::gate_time_s)
        .def_readwrite("dark_count_rate", &SystemParams::dark_count_rate)
        .def_readwrite("wavelength_m", &SystemParams::wavelength_m)
        .def_readwrite("filter_bandwidth_nm", &SystemParams::filter_bandwidth_nm)
        .def_readwrite("scatter_rate", &SystemParams::scatter_rate)
        .def_readwrite("scatter_error_prob", &SystemParams::scatter_error_prob);

    py::class_<ProtocolParams>(m, "ProtocolParams")
        .def(py::init<>())
        .def_readwrite("sifting", &ProtocolParams::sifting)
        .def_readwrite("ec_efficiency", &ProtocolParams::ec_efficiency)
        .def_readwrite("mu", &ProtocolParams::mu)
        .def_readwrite("nu", &ProtocolParams::nu);

    py::class_<channel::ReceiverGeometry>(m, "ReceiverGeometry")
        .def(py::init<>())
        .def_readwrite("aperture_m2", &channel::ReceiverGeometry::aperture_m2)
        .def_readwrite("fov_rad", &channel::ReceiverGeometry::fov_rad)
        .def("solid_angle", &channel::ReceiverGeometry::solid_angle);

    py::class_<channel::ChannelScenario>(m, "ChannelScenario")
        .def(py::init<>())
        .def_readwrite("attenuation", &channel::ChannelScenario::attenuation)
        .def_readwrite("tx_depth_m", &channel::ChannelScenario::tx_depth_m)
        .def_readwrite("rx_fixed_depth_m", &channel::ChannelScenario::rx_fixed_depth_m)
        .def_property(
            "mode", [](const channel::ChannelScenario& c) { return std::string(channel::to_string(c.mode)); },
            [](channel::ChannelScenario& c, const std::string& v) { c.mode = channel::parse_mode(v); })
        .def_property(
            "water_type",
            [](const channel::ChannelScenario& c) { return std::string(channel::csv_code(c.water_type)); },
            [](channel::ChannelScenario& c, const std::string& v) { c.water_type = channel::parse_water_type(v); })
        .def_property(
            "lunar_phase",
            [](const channel::ChannelScenario& c) { return std::string(channel::to_string(c.lunar_phase)); },
            [](channel::ChannelScenario& c, const std::string& v) { c.lunar_phase = channel::parse_lunar_phase(v); });

    py::class_<io::Config>(m, "Config")
        .def(py::init<>())
        .def_readwrite("system", &io::Config::system)
        .def_readwrite("channel", &io::Config::channel)
        .def_readwrite("protocol", &io::Config::protocol)
        .def_readwrite("geometry", &io::Config::geometry)
        .def_readwrite("kd_ratio", &io::Config::kd_ratio)
        .def("to_text", &io::to_config_text);

    m.def("preset", [](const std::string& name) { return io::preset(name); }, py::arg("name"));
    m.def("parse_config", [](const std::string& text) { return io::parse_config(text); }, py::arg("text"));
    m.def("load_config", &io::load_config, py::arg("path"));

    py::class_<Link>(m, "Link")
        .def(py::init([](const io::Config& cfg, std::optional<std::string> radiance) {
                 return io::make_link(cfg, io::resolve_radiance(cfg, radiance));
             }),
             py::arg("config"), py::arg("radiance") = py::none())
        .def_readwrite("system", &Link::system)
        .def_readwrite("geometry", &Link::geometry)
        .def_readwrite("channel", &Link::channel)
        .def_readwrite("radiance_override", &Link::radiance_override);

    m.def(
        "qber", [](const Link& link, double r, bool legacy) { return as_dict(qber::qber(link, r, formula(legacy))); },
        py::arg("link"), py::arg("range_m"), py::arg("legacy") = false);

    m.def("binary_entropy", &keyrate::binary_entropy);
    m.def("sifted_rate", &keyrate::sifted_rate, py::arg("link"), py::arg("protocol"), py::arg("range_m"));
    m.def(
        "key_rate",
        [](const Link& link, const ProtocolParams& proto, double r, const std::string& method) {
            const auto rep = keyrate::key_rate_report(link, proto, r, keyrate::parse_method(method));
            py::dict d;
            d["sifted_bps"] = rep.sifted;
            d["secure_bps"] = rep.secure;
            d["secure_decoy_bps"] = rep.secure_decoy;
            d["secure_nodecoy_bps"] = rep.secure_no_decoy;
            d["secure_onedecoy_bps"] = rep.secure_one_decoy;
            d["Y1"] = rep.single_yield;
            d["Q1"] = rep.single_gain;
            d["e1"] = rep.single_error;
            d["omega_untagged"] = rep.omega_untagged;
            d["insecure"] = rep.insecure;
            return d;
        },
        py::arg("link"), py::arg("protocol"), py::arg("range_m"), py::arg("method") = "decoy");

    m.def(
        "sweep_csv",
        [](const Link& link, const ProtocolParams& proto, const std::string& var, double from, double to, int steps,
           const std::string& method, bool legacy) {
            sweep::SweepSpec spec;
            spec.variable = sweep::parse_variable(var);
            spec.from = from;
            spec.to = to;
            spec.steps = steps;
            spec.fixed = link;
            spec.protocol = proto;
            spec.outputs = {true, true, true};
            spec.secure_method = keyrate::parse_method(method);
            spec.formula = formula(legacy);
            py::gil_scoped_release release;
            return io::to_csv(sweep::sweep_table(spec, sweep::sweep(spec)));
        },
        py::arg("link"), py::arg("protocol"), py::arg("var"), py::arg("start"), py::arg("stop"), py::arg("steps"),
        py::arg("method") = "decoy", py::arg("legacy") = false);

    m.def(
        "max_distance",
        [](const Link& link, const ProtocolParams& proto, const std::string& criterion, double threshold,
           const std::string& method, bool legacy) {
            sweep::MaxDistanceQuery q;
            if (criterion == "qber")
                q.criterion = sweep::Criterion::QberThreshold;
            else if (criterion == "rate")
                q.criterion = sweep::Criterion::PositiveSecureRate;
            else
                throw DomainError("criterion must be qber or rate");
            q.threshold = threshold;
            q.method = keyrate::parse_method(method);
            q.formula = formula(legacy);
            return sweep::max_secure_distance(q, link, proto).distance_m;
        },
        py::arg("link"), py::arg("protocol"), py::arg("criterion") = "qber", py::arg("threshold") = 0.11,
        py::arg("method") = "decoy", py::arg("legacy") = false);

    m.def(
        "polarizer_matrix", [](double eps, double theta) { return as_list(optics::polarizer_matrix({eps, theta})); },
        py::arg("epsilon"), py::arg("theta"));
    m.def(
        "waveplate_matrix", [](double delta, double theta) { return as_list(optics::waveplate_matrix({delta, theta})); },
        py::arg("delta"), py::arg("theta"));
    m.def(
        "bs_reflect_matrix",
        [](double rp, double rs, double phi) {
            return as_list(optics::bs_reflect_matrix({1.0 - rp, 1.0 - rs, rp, rs, 0.0, phi}));
        },
        py::arg("rp"), py::arg("rs"), py::arg("phi"));
    m.def(
        "bs_transmit_matrix",
        [](double tp, double ts, double phi) {
            return as_list(optics::bs_transmit_matrix({tp, ts, 1.0 - tp, 1.0 - ts, phi, 0.0}));
        },
        py::arg("tp"), py::arg("ts"), py::arg("phi"));
    m.def(
        "train_contrast",
        [](const std::string& text, const std::string& state) {
            const auto train = io::parse_train(text);
            const auto s = optics::parse_basis_state(state);
            const auto out = optics::apply(train, optics::basis_state(train.source.value_or(s)));
            return py::make_tuple(as_array(out), optics::contrast_of(out, train.analyzer.value_or(s)));
        },
        py::arg("text"), py::arg("state"));
    m.def(
        "worst_case_contrast",
        [](const std::string& box) {
            if (box != "ordinary" && box != "optimal") throw DomainError("box must be ordinary or optimal");
            const auto wc = optics::worst_case_contrast(box == "optimal" ? optics::ToleranceBox::optimal()
                                                                         : optics::ToleranceBox::ordinary());
            py::dict d;
            d["system"] = wc.system;
            d["dm_path"] = wc.dm_path;
            d["hv_path"] = wc.hv_path;
            return d;
        },
        py::arg("box") = "ordinary");

    m.def("format_number", &io::format_number);
    m.def(
        "figure_csv", [](const std::string& name) { return io::to_csv(figures::build(name)); }, py::arg("name"));
}
