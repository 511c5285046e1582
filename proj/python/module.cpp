#include "certify/certify.hpp"
#include "certify/errors.hpp"
#include "certify/scenario.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

certify::Scenario scenario_from_arg(const py::object& arg) {
    if (py::isinstance<py::str>(arg))
        return certify::gallery_scenario(arg.cast<std::string>());
    py::module_ json = py::module_::import("json");
    std::string text = json.attr("dumps")(arg).cast<std::string>();
    return certify::parse_scenario(text);
}

py::object run_scenario_py(const py::object& scenario, const std::string& out_dir,
                           int resolution) {
    certify::Scenario s = scenario_from_arg(scenario);
    if (resolution > 0)
        s.resolution = resolution;
    certify::RunResult res = certify::run_scenario(s, out_dir);
    std::ifstream in(res.report_path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto report = nlohmann::ordered_json::parse(ss.str());
    py::dict out;
    out["exit_status"] = res.exit_status;
    out["verdict"] = res.verdict;
    out["report_path"] = res.report_path;
    out["report"] = json_to_py(report);
    return out;
}

py::object certify_py(const std::map<std::string, py::object>& sigma,
                      const std::pair<std::string, std::string>& phi, int n_boundary,
                      const std::string& check) {
    std::array<std::string, 4> entries = {"1", "0", "0", "1"};
    double K = 1.0;
    std::string smooth = "Smooth";
    for (const auto& [k, v] : sigma) {
        if (k == "s11") entries[0] = v.cast<std::string>();
        else if (k == "s12") entries[1] = v.cast<std::string>();
        else if (k == "s21") entries[2] = v.cast<std::string>();
        else if (k == "s22") entries[3] = v.cast<std::string>();
        else if (k == "K") K = v.cast<double>();
        else if (k == "smoothness") smooth = v.cast<std::string>();
        else throw certify::ScenarioError("unknown sigma key '" + k + "'");
    }
    certify::SigmaField field = certify::SigmaField::from_exprs(
        entries, K, certify::smoothness_from_string(smooth));
    certify::BoundaryMap map = certify::BoundaryMap::from_exprs(phi.first, phi.second);
    certify::DiskMesh mesh = certify::build_disk_mesh(n_boundary);
    certify::CertificateReport rep = check == "nonconvex"
                                         ? certify::certify_nonconvex(field, map, mesh)
                                         : certify::certify_main(field, map, mesh);
    py::dict out;
    out["verdict"] = certify::to_string(rep.verdict);
    out["exit_status"] = certify::exit_code(rep.verdict);
    out["min_boundary_det"] = rep.min_boundary_det;
    out["interior_min_det"] = rep.interior_min_det;
    out["fold_triangle_count"] = rep.fold_triangle_count;
    if (rep.topology) {
        py::dict topo;
        topo["M"] = rep.topology->sweep.M;
        topo["constant"] = rep.topology->sweep.constant;
        topo["counts"] = rep.topology->sweep.counts;
        topo["wn_f"] = rep.topology->identities.wn_f;
        topo["wn_phi"] = rep.topology->identities.wn_phi;
        topo["m_plus_one_holds"] = rep.topology->identities.m_plus_one_holds;
        topo["homotopy_min_boundary_det"] = rep.topology->homotopy.min_boundary_det;
        out["topology"] = topo;
    }
    if (rep.injectivity) {
        py::dict inj;
        inj["n_probe"] = rep.injectivity->n_probe;
        inj["bad_winding"] = rep.injectivity->bad_winding;
        inj["collision_count"] = rep.injectivity->collision_count;
        out["injectivity"] = inj;
    }
    out["diagnostics"] = rep.diagnostics;
    return out;
}

} // namespace

PYBIND11_MODULE(pycertify, m) {
    m.doc() = "Boundary-Jacobian diffeomorphism certificates for sigma-harmonic mappings "
              "of the unit disk";

    py::register_exception<certify::Error>(m, "CertifyError");

    m.def("gallery_names", [] {
        std::vector<std::string> names;
        for (const auto& s : certify::gallery())
            names.push_back(s.name);
        return names;
    });
    m.def("gallery_description", [](const std::string& name) {
        return certify::gallery_scenario(name).description;
    });
    m.def("run_scenario", &run_scenario_py, py::arg("scenario"), py::arg("out_dir"),
          py::arg("resolution") = 0,
          "Run a scenario (gallery name or scenario dict) and return the report. Writes "
          "report.json and CSV profiles under out_dir.");
    m.def("certify", &certify_py, py::arg("sigma"), py::arg("phi"), py::arg("n_boundary") = 256,
          py::arg("check") = "main",
          "Certify the mapping for a coefficient field and boundary curve given as "
          "expression strings.");
}
