#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mixfront/classify.hpp"
#include "mixfront/commands.hpp"
#include "mixfront/config.hpp"
#include "mixfront/errors.hpp"
#include "mixfront/io.hpp"

namespace py = pybind11;
using namespace mixfront;
using nlohmann::json;

namespace {

RunConfig config_from_text(const std::string& text) { return parse_config(json::parse(text)); }

json series_json(const Series& s) {
    return {{"t", s.t},         {"g", s.g},         {"h", s.h},
            {"gprime", s.gprime}, {"hprime", s.hprime}, {"max_u", s.max_u},
            {"max_v", s.max_v},   {"vx_left", s.vx_left}, {"vx_right", s.vx_right}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of mixfront";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Kernel>(m, "Kernel")
        .def_static("tent", &Kernel::tent, py::arg("radius"))
        .def_static("truncated_gaussian", &Kernel::truncated_gaussian, py::arg("sigma"),
                    py::arg("cutoff"))
        .def_static("plateau", &Kernel::plateau, py::arg("flat_radius"), py::arg("taper"))
        .def_static("sampled", &Kernel::sampled, py::arg("x"), py::arg("density"),
                    py::arg("symmetrize") = true)
        .def("__call__", [](const Kernel& k, double x) { return k(x); })
        .def("validate", [](const Kernel& k) {
            const auto r = k.validate();
            py::dict d;
            d["ok"] = r.ok();
            d["normalization_defect"] = r.normalization_defect;
            d["symmetry_defect"] = r.symmetry_defect;
            d["first_failure"] = r.first_failure();
            return d;
        })
        .def("to_json", [](const Kernel& k) { return to_json(k).dump(); });

    m.def(
        "lambda1_nonlocal",
        [](const Kernel& k, double d1, double a_T, double length, std::size_t nodes) {
            return lambda1_nonlocal(k, d1, PeriodicCoefficient::constant(a_T), length, nodes).lambda1;
        },
        py::arg("kernel"), py::arg("d1"), py::arg("a_T"), py::arg("length"), py::arg("nodes") = 400);
    m.def(
        "lambda1_mixed",
        [](const Kernel& k, double d2, double tau, double c_T, double length, std::size_t nodes) {
            return lambda1_mixed(k, d2, tau, PeriodicCoefficient::constant(c_T), length, nodes).lambda1;
        },
        py::arg("kernel"), py::arg("d2"), py::arg("tau"), py::arg("c_T"), py::arg("length"),
        py::arg("nodes") = 400);

    m.def("normalize_config", [](const std::string& text) {
        return to_json(config_from_text(text)).dump();
    });
    m.def("thresholds", [](const std::string& text) {
        const RunConfig cfg = config_from_text(text);
        const Thresholds th =
            compute_thresholds(cfg.spec, cfg.numerics.bisection_tol, cfg.numerics.M);
        return thresholds_json(th, cfg.spec).dump();
    });
    m.def("predict", [](const std::string& text) {
        const RunConfig cfg = config_from_text(text);
        const Thresholds th =
            compute_thresholds(cfg.spec, cfg.numerics.bisection_tol, cfg.numerics.M);
        return to_json(predict(cfg.spec, th)).dump();
    });
    m.def(
        "simulate",
        [](const std::string& text) {
            const RunConfig cfg = config_from_text(text);
            Trajectory tr;
            Outcome o;
            {
                py::gil_scoped_release release;
                const Thresholds th =
                    compute_thresholds(cfg.spec, cfg.numerics.bisection_tol, cfg.numerics.M);
                const ClassifyOptions copts = cfg.classify_options(th);
                tr = run(cfg.spec, with_early_stop(cfg.run_options(), copts));
                o = classify(tr, copts);
            }
            json j = to_json(o);
            j["series"] = series_json(tr.series);
            j["steps"] = tr.steps;
            j["stop_reason"] = tr.stop_reason;
            return j.dump();
        },
        py::arg("config_json"));

    m.def(
        "run_command",
        [](const std::string& name, const std::string& path, std::optional<std::string> out,
           std::optional<double> horizon, std::optional<std::uint64_t> seed, std::size_t jobs,
           bool confirm) {
            Overrides ov{out, horizon, seed, jobs};
            std::ostringstream log, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_command(name, path, ov, confirm, log, err);
            }
            return py::make_tuple(code, log.str(), err.str());
        },
        py::arg("name"), py::arg("config"), py::arg("out") = py::none(),
        py::arg("horizon") = py::none(), py::arg("seed") = py::none(), py::arg("jobs") = 1,
        py::arg("confirm") = false);
}
