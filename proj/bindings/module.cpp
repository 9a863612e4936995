#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rum/framework_io.hpp"

namespace py = pybind11;

namespace {

// JSON documents cross the boundary as python objects via the json module;
// this keeps the python surface identical to the CLI output format.
py::object json_to_py(const rum::json& j) {
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("loads")(j.dump());
}

rum::json py_to_json(const py::object& obj) {
    py::module_ pyjson = py::module_::import("json");
    std::string dumped = py::cast<std::string>(pyjson.attr("dumps")(obj));
    return rum::json::parse(dumped);
}

rum::Character character_arg(const rum::FrameworkBundle& bundle, const py::object& chi) {
    return rum::character_from_json(bundle.framework.rep.group, py_to_json(chi), "character");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RUM spectra, joint spectral points and flexes of gain frameworks";

    py::register_exception<rum::Error>(m, "RumError");

    py::class_<rum::FrameworkBundle>(m, "Framework")
        .def_static("load", &rum::load_framework_file, py::arg("path"))
        .def_static(
            "from_json",
            [](const py::object& doc) { return rum::parse_framework(py_to_json(doc)); },
            py::arg("doc"))
        .def_property_readonly("group",
                               [](const rum::FrameworkBundle& b) {
                                   return json_to_py(rum::group_to_json(b.framework.rep.group));
                               })
        .def_property_readonly("num_vertices",
                               [](const rum::FrameworkBundle& b) {
                                   return b.framework.num_vertices();
                               })
        .def_property_readonly("num_edges", [](const rum::FrameworkBundle& b) {
            return b.framework.num_edges();
        });

    m.def(
        "orbit_matrix",
        [](const rum::FrameworkBundle& b, const py::object& chi) {
            return rum::orbit_matrix(b.framework, character_arg(b, chi)).matrix;
        },
        py::arg("framework"), py::arg("character"));

    m.def(
        "rum_spectrum",
        [](const rum::FrameworkBundle& b, int samples, double tol) {
            const auto& fw = b.framework;
            std::vector<rum::SpectrumPoint> points;
            if (fw.rep.group.is_finite()) {
                points = rum::rum_spectrum_finite(fw, tol);
            } else {
                rum::ScanOptions opts;
                opts.samples_per_circle = samples;
                opts.rank_tol = tol;
                points = rum::rum_spectrum_scan(fw, opts).points;
            }
            return json_to_py(rum::spectrum_to_json(fw.rep.group, points));
        },
        py::arg("framework"), py::arg("samples") = 4096, py::arg("tol") = 1e-9);

    m.def(
        "joint_spectral_points",
        [](const rum::FrameworkBundle& b) {
            return json_to_py(rum::joint_points_to_json(
                b.framework.rep.group, rum::joint_spectral_points(b.framework)));
        },
        py::arg("framework"));

    m.def(
        "rum_membership",
        [](const rum::FrameworkBundle& b, const py::object& chi, double tol) {
            auto report = rum::rum_membership(b.framework, character_arg(b, chi), tol);
            return py::make_tuple(report.member, report.basis);
        },
        py::arg("framework"), py::arg("character"), py::arg("tol") = 1e-9);

    m.def(
        "chi_flex_basis",
        [](const rum::FrameworkBundle& b, const py::object& chi, double tol) {
            py::list out;
            for (const auto& z : rum::chi_flex_basis(b.framework, character_arg(b, chi), tol))
                out.append(py::make_tuple(json_to_py(rum::character_to_json(z.chi)),
                                          rum::ComplexVector(z.amplitude)));
            return out;
        },
        py::arg("framework"), py::arg("character"), py::arg("tol") = 1e-9);

    m.def(
        "verify_chi_flex",
        [](const rum::FrameworkBundle& b, const py::object& chi,
           const rum::ComplexVector& amplitude, int window) {
            const auto& fw = b.framework;
            rum::ChiSymmetricVector z{character_arg(b, chi), amplitude};
            int radius = window >= 0 ? window : static_cast<int>(rum::gain_margin(fw)) + 2;
            rum::WindowedField f = rum::evaluate_chi_vector(
                fw, z, rum::make_window(fw.rep.group, radius));
            auto check = rum::verify_flex(fw, f, rum::default_flex_tol(fw));
            return py::make_tuple(check.pass, check.residual);
        },
        py::arg("framework"), py::arg("character"), py::arg("amplitude"),
        py::arg("window") = -1);

    m.def(
        "translation_space",
        [](const rum::FrameworkBundle& b) {
            py::list out;
            for (const auto& z : rum::translation_space(b.framework))
                out.append(py::make_tuple(json_to_py(rum::character_to_json(z.chi)),
                                          rum::ComplexVector(z.amplitude)));
            return out;
        },
        py::arg("framework"));

    m.def(
        "check_ap_rigidity",
        [](const rum::FrameworkBundle& b, int samples, double tol) {
            rum::ScanOptions opts;
            opts.samples_per_circle = samples;
            opts.rank_tol = tol;
            auto cert = rum::check_ap_rigidity(b.framework, opts, tol);
            return json_to_py(rum::certificate_to_json(b.framework, cert));
        },
        py::arg("framework"), py::arg("samples") = 4096, py::arg("tol") = 1e-9);

    m.def(
        "covering",
        [](const rum::FrameworkBundle& b, int window) {
            auto cov = rum::build_covering(b.framework, b.placement, b.norm,
                                           rum::make_window(b.framework.rep.group, window));
            return json_to_py(rum::covering_to_json(cov));
        },
        py::arg("framework"), py::arg("window"));

    m.def(
        "folner_defect",
        [](const py::object& group, const py::object& gamma, int n) {
            rum::GroupSpec spec = rum::group_from_json(py_to_json(group), "group");
            return rum::folner_defect(
                spec, rum::element_from_json(spec, py_to_json(gamma), "gamma"), n);
        },
        py::arg("group"), py::arg("gamma"), py::arg("n"));

    m.def(
        "evaluate_character",
        [](const py::object& group, const py::object& chi, const py::object& gamma) {
            rum::GroupSpec spec = rum::group_from_json(py_to_json(group), "group");
            return rum::evaluate_character(
                spec, rum::character_from_json(spec, py_to_json(chi), "character"),
                rum::element_from_json(spec, py_to_json(gamma), "gamma"));
        },
        py::arg("group"), py::arg("character"), py::arg("gamma"));
}
