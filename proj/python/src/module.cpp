// Python bindings: configuration, the four commands, the regularized
// potential and snapshot access.
#include "nsch/commands.hpp"
#include "nsch/errors.hpp"
#include "nsch/io.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace nsch;

namespace {

py::array_t<double> as_array(const std::vector<double>& v, std::uint32_t nx, std::uint32_t ny)
{
    py::array_t<double> a({static_cast<py::ssize_t>(ny), static_cast<py::ssize_t>(nx)});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::array_t<double> as_array(const ScalarField& f)
{
    return as_array(f.data(), static_cast<std::uint32_t>(f.grid().nx()), static_cast<std::uint32_t>(f.grid().ny()));
}

py::dict state_dict(const State& s)
{
    py::dict d;
    d["t"] = s.t;
    d["phi"] = as_array(s.phi);
    d["sigma"] = as_array(s.sigma);
    if (!s.mu.empty())
        d["mu"] = as_array(s.mu);
    if (s.has_velocity()) {
        d["vx"] = as_array(s.v.x);
        d["vy"] = as_array(s.v.y);
    }
    return d;
}

// Element-wise map over any array shape.
template <class F>
py::array_t<double> map(py::array_t<double, py::array::c_style | py::array::forcecast> x, F f)
{
    py::array_t<double> out(x.request().shape);
    const double* in = x.data();
    double* o = out.mutable_data();
    for (py::ssize_t i = 0; i < x.size(); ++i)
        o[i] = f(in[i]);
    return out;
}

RegPotential make_reg(double theta, double theta_c, double eps, double chi)
{
    return RegPotential(PotentialParams::flory_huggins(theta, theta_c), eps, chi);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Pseudo-spectral Navier-Stokes-Cahn-Hilliard-Keller-Segel simulator";

    auto base = py::register_exception<Error>(m, "NschError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<ParameterError>(m, "ParameterError", base);
    py::register_exception<DataError>(m, "DataError", base);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<DivergenceError>(m, "DivergenceError", base);
    py::register_exception<StabilityError>(m, "StabilityError", base);
    py::register_exception<IoError>(m, "IoError", base);

    py::class_<RunConfig>(m, "RunConfig")
        .def("validate", &RunConfig::validate)
        .def("canonical", &RunConfig::canonical)
        .def("fingerprint", &RunConfig::fingerprint)
        .def_property(
            "output_dir", [](const RunConfig& c) { return c.output.dir; },
            [](RunConfig& c, const std::string& d) { c.output.dir = d; })
        .def("__repr__", [](const RunConfig& c) { return "<RunConfig " + c.fingerprint() + ">"; });

    m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<config>");
    m.def("load_config", &load_config, py::arg("path"));

    m.def(
        "run",
        [](const RunConfig& cfg) {
            std::ostringstream log;
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = cmd_run(cfg, log);
            }
            py::dict d;
            d["steps"] = s.result.steps;
            d["dt"] = s.result.dt;
            d["stabilization"] = s.result.stabilization;
            d["max_abs_residual"] = s.result.max_abs_residual;
            d["csv_path"] = s.csv_path;
            d["snapshots"] = s.snapshots;
            d["final_state"] = state_dict(s.result.final_state);
            d["log"] = log.str();
            return d;
        },
        py::arg("config"), "Integrate a configuration; writes diagnostics.csv and snapshots below output_dir.");

    m.def(
        "check_potential",
        [](const RunConfig& cfg) {
            std::ostringstream log;
            py::list rows;
            for (const auto& r : cmd_check_potential(cfg, log)) {
                py::dict d;
                d["eps"] = r.eps;
                d["chi"] = r.chi;
                d["knot_jump_value"] = r.jump_value;
                d["knot_jump_derivative"] = r.jump_derivative;
                d["min_second"] = r.min_second;
                d["min_r_prime"] = r.min_r_prime;
                d["max_excess"] = r.max_excess;
                d["r_star_upper"] = r.r_star_upper;
                d["r_star_lower"] = r.r_star_lower;
                d["min_deficit"] = r.min_deficit;
                d["young_gap_min"] = r.young_gap_min;
                rows.append(d);
            }
            return rows;
        },
        py::arg("config"));

    m.def(
        "compare_forms",
        [](const RunConfig& cfg) {
            std::ostringstream log;
            FormComparison f;
            {
                py::gil_scoped_release release;
                f = cmd_compare_forms(cfg, log);
            }
            py::dict d;
            d["t"] = f.t;
            d["sigma_min_cross_diffusion"] = f.sigma_min_cross;
            d["sigma_min_linear_transport"] = f.sigma_min_linear;
            return d;
        },
        py::arg("config"));

    m.def(
        "twin_run",
        [](const RunConfig& cfg, const std::vector<double>& deltas) {
            std::ostringstream log;
            std::vector<TwinSeries> series;
            {
                py::gil_scoped_release release;
                series = cmd_twin_run(cfg, deltas, log);
            }
            py::list out;
            for (const auto& s : series) {
                py::dict d;
                d["delta"] = s.delta;
                d["t"] = s.t;
                d["W"] = s.W;
                d["W0_expected"] = s.W0_expected;
                d["sup_W"] = s.sup_W();
                out.append(d);
            }
            return out;
        },
        py::arg("config"), py::arg("deltas") = std::vector<double>{});

    py::class_<RegPotential>(m, "RegPotential")
        .def(py::init(&make_reg), py::arg("theta") = 1.0, py::arg("theta_c") = 2.0, py::arg("eps") = 0.05,
             py::arg("chi") = 0.0)
        .def("value", [](const RegPotential& p, py::array_t<double> r) { return map(r, [&](double x) { return p.value(x); }); })
        .def("prime", [](const RegPotential& p, py::array_t<double> r) { return map(r, [&](double x) { return p.prime(x); }); })
        .def("second", [](const RegPotential& p, py::array_t<double> r) { return map(r, [&](double x) { return p.second(x); }); })
        .def("value0", [](const RegPotential& p, py::array_t<double> r) { return map(r, [&](double x) { return p.value0(x); }); })
        .def("knots", &RegPotential::knots)
        .def("knot_jumps",
             [](const RegPotential& p) {
                 const KnotJumps j = knot_jumps(p);
                 return py::make_tuple(j.value, j.derivative);
             })
        .def(
            "r_star", [](const RegPotential& p, bool upper) { return find_r_star(p, upper ? RStarSide::upper : RStarSide::lower); },
            py::arg("upper") = true);

    m.def(
        "young_gap",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
           py::array_t<double, py::array::c_style | py::array::forcecast> b) {
            if (a.size() != b.size())
                throw ShapeError("young_gap: a and b must have the same size");
            py::array_t<double> out(a.request().shape);
            for (py::ssize_t i = 0; i < a.size(); ++i)
                out.mutable_data()[i] = young_gap(a.data()[i], b.data()[i]);
            return out;
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "read_snapshot",
        [](const std::string& path) {
            const Snapshot s = read_snapshot(path);
            py::dict d;
            d["nx"] = s.nx;
            d["ny"] = s.ny;
            d["lx"] = s.lx;
            d["ly"] = s.ly;
            d["t"] = s.t;
            py::dict fields;
            for (const auto& [name, values] : s.fields)
                fields[py::str(name)] = as_array(values, s.nx, s.ny);
            d["fields"] = fields;
            return d;
        },
        py::arg("path"));

    m.def("diagnostics_columns", [] {
        std::vector<std::string> out;
        for (auto n : DiagnosticsRecord::column_names())
            out.emplace_back(n);
        return out;
    });
}
