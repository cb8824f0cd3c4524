#include "nlpar/analysis.hpp"
#include "nlpar/config.hpp"
#include "nlpar/ensemble.hpp"
#include "nlpar/error.hpp"
#include "nlpar/field_io.hpp"
#include "nlpar/nonlocal_op.hpp"
#include "nlpar/oracles.hpp"
#include "nlpar/run.hpp"
#include "nlpar/tails.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace nlpar;

namespace {

py::array_t<double> field_values(const SpaceTimeField& f) {
    py::array_t<double> out({f.levels(), f.grid().size()});
    auto v = f.values();
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ExteriorData exterior_from(const std::string& kind, double parameter) {
    if (kind == "zero") return ExteriorData::zero();
    if (kind == "constant") return ExteriorData::constant(parameter);
    if (kind == "poisson") return ExteriorData::poisson_kernel(parameter);
    throw PreconditionError("exterior kind must be zero, constant or poisson");
}

}  // namespace

PYBIND11_MODULE(_nlpar, m) {
    m.doc() = "Bindings for the nlpar nonlocal parabolic toolkit";

    py::register_exception<Error>(m, "NlparError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("fractional_laplacian", &KernelSpec::fractional_laplacian, py::arg("dim"), py::arg("order"),
                    py::arg("lambda_") = py::none())
        .def_static("constant_multiple", &KernelSpec::constant_multiple, py::arg("dim"), py::arg("order"),
                    py::arg("lambda_"), py::arg("multiple") = 1.0)
        .def("__call__", [](const KernelSpec& k, Point x, Point y, double t) { return k(x, y, t); })
        .def_property_readonly("dim", &KernelSpec::dim)
        .def_property_readonly("order", &KernelSpec::order)
        .def_property_readonly("lambda_", &KernelSpec::lambda)
        .def_property_readonly("coefficient", &KernelSpec::coefficient);

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, double, int>(), py::arg("dim"), py::arg("half_width"), py::arg("nodes"))
        .def_property_readonly("spacing", &Grid::spacing)
        .def_property_readonly("size", &Grid::size)
        .def("coordinates", [](const Grid& g) {
            std::vector<double> x;
            for (int i = 0; i < g.nodes_per_axis(); ++i) x.push_back(g.coordinate(i));
            return x;
        });

    py::class_<SpaceTimeField>(m, "SpaceTimeField")
        .def_property_readonly("grid", &SpaceTimeField::grid)
        .def_property_readonly("times",
                               [](const SpaceTimeField& f) { return std::vector<double>(f.times().begin(), f.times().end()); })
        .def_property_readonly("values", &field_values)
        .def("save", [](const SpaceTimeField& f, const std::string& path) { io::save(path, f); })
        .def_static("load", [](const std::string& path) { return io::load(path); });

    m.def(
        "solve",
        [](const KernelSpec& k, const Grid& g, std::vector<double> initial, const std::string& exterior,
           double parameter, double t_start, double t_end, double dt, const std::string& scheme) {
            return solve(SolveSpec{k, g, std::move(initial), exterior_from(exterior, parameter), t_start, t_end, dt,
                                   time_scheme_from_string(scheme)});
        },
        py::arg("kernel"), py::arg("grid"), py::arg("initial"), py::arg("exterior") = "zero",
        py::arg("parameter") = 0.0, py::arg("t_start") = 0.0, py::arg("t_end") = 1.0, py::arg("dt") = 1.0 / 64,
        py::arg("scheme") = "implicit_euler");

    m.def(
        "tail",
        [](const SpaceTimeField& f, const std::string& exterior, double parameter, double x0, double r, double t1,
           double t2) {
            return tail(f, exterior_from(exterior, parameter), TailQuery{{x0, 0.0}, r, t1, t2, TailTarget::absolute_value});
        },
        py::arg("field"), py::arg("exterior"), py::arg("parameter"), py::arg("x0"), py::arg("r"), py::arg("t1"),
        py::arg("t2"));

    m.def("heat_kernel", [](double order, double x, double t) { return oracle::fractional_heat_kernel(1, order, {x, 0.0}, t); },
          py::arg("order"), py::arg("x"), py::arg("t"));
    m.def("phi", [](double x, int dim, double order) { return phi({x, 0.0}, dim, order); }, py::arg("x"),
          py::arg("dim"), py::arg("order"));

    m.def(
        "verify_harnack",
        [](const SpaceTimeField& f, const std::string& exterior, double parameter, double x0, double r, double R,
           double t0) {
            const auto rep = verify_harnack(f, exterior_from(exterior, parameter), {x0, 0.0}, r, R, t0,
                                            default_alpha(f.order()), 0.0);
            return py::dict(py::arg("lhs") = rep.lhs, py::arg("rhs_inf") = rep.rhs_inf,
                            py::arg("rhs_tail") = rep.rhs_tail, py::arg("C_emp") = rep.C_emp,
                            py::arg("pass_") = rep.pass);
        },
        py::arg("field"), py::arg("exterior"), py::arg("parameter"), py::arg("x0"), py::arg("r"), py::arg("R"),
        py::arg("t0"));

    m.def(
        "config_hash", [](const std::string& text) { return parse_config(text).hash(); }, py::arg("text"));
    m.def(
        "run",
        [](const std::string& text, const std::string& command, const std::string& out_dir) {
            RunConfig c = parse_config(text);
            c.command = command;
            c.output.directory = out_dir;
            std::ostringstream log;
            const int code = run(c, log);
            return py::make_tuple(code, log.str());
        },
        py::arg("config_text"), py::arg("command"), py::arg("out_dir"));
}
