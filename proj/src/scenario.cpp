#include "certify/scenario.hpp"

#include "certify/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace certify {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ScenarioError("unknown key '" + it.key() + "' in " + where);
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ScenarioError("scenario must be a JSON object");
    reject_unknown(doc,
                   {"name", "description", "sigma", "phi", "resolution", "n_alpha", "grading",
                    "tolerances", "checks", "dump_fields"},
                   "scenario");

    Scenario s;
    try {
        s.name = doc.value("name", "unnamed");
        s.description = doc.value("description", "");
        if (doc.contains("sigma")) {
            const json& sg = doc["sigma"];
            reject_unknown(sg, {"s11", "s12", "s21", "s22", "K", "smoothness"}, "scenario.sigma");
            s.sigma_entries = {sg.value("s11", "1"), sg.value("s12", "0"), sg.value("s21", "0"),
                               sg.value("s22", "1")};
            s.K = sg.value("K", 1.0);
            s.smoothness = smoothness_from_string(sg.value("smoothness", "Smooth"));
        }
        if (doc.contains("phi")) {
            const json& ph = doc["phi"];
            reject_unknown(ph, {"x", "y", "points_file"}, "scenario.phi");
            if (ph.contains("points_file")) {
                if (ph.contains("x") || ph.contains("y"))
                    throw ScenarioError("scenario.phi: give either expressions or points_file");
                s.points_file = ph["points_file"].get<std::string>();
            } else {
                s.phi_x = ph.value("x", "cos(theta)");
                s.phi_y = ph.value("y", "sin(theta)");
            }
        }
        s.resolution = doc.value("resolution", 256);
        s.n_alpha = doc.value("n_alpha", 16);
        s.grading = doc.value("grading", 1.0);
        if (doc.contains("tolerances")) {
            const json& t = doc["tolerances"];
            reject_unknown(t, {"boundary_det", "ellipticity", "hull"}, "scenario.tolerances");
            s.boundary_det_tol = t.value("boundary_det", -1.0);
            s.ellipticity_tol = t.value("ellipticity", 1e-10);
            s.hull_tol = t.value("hull", -1.0);
        }
        if (doc.contains("checks")) {
            s.checks = doc["checks"].get<std::vector<std::string>>();
            for (const auto& c : s.checks)
                if (c != "main" && c != "nonconvex" && c != "topology" && c != "injectivity")
                    throw ScenarioError("unknown check '" + c + "'");
        }
        s.dump_fields = doc.value("dump_fields", false);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario field has wrong type: ") + e.what());
    }
    if (s.resolution < 8)
        throw ScenarioError("scenario.resolution must be >= 8");
    if (s.n_alpha < 1)
        throw ScenarioError("scenario.n_alpha must be >= 1");
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

namespace {

json scenario_json(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    doc["description"] = s.description;
    doc["sigma"] = {{"s11", s.sigma_entries[0]}, {"s12", s.sigma_entries[1]},
                    {"s21", s.sigma_entries[2]}, {"s22", s.sigma_entries[3]},
                    {"K", s.K},                  {"smoothness", to_string(s.smoothness)}};
    if (!s.points_file.empty())
        doc["phi"] = {{"points_file", s.points_file}};
    else
        doc["phi"] = {{"x", s.phi_x}, {"y", s.phi_y}};
    doc["resolution"] = s.resolution;
    doc["n_alpha"] = s.n_alpha;
    doc["grading"] = s.grading;
    doc["tolerances"] = {{"boundary_det", s.boundary_det_tol},
                         {"ellipticity", s.ellipticity_tol},
                         {"hull", s.hull_tol}};
    doc["checks"] = s.checks;
    doc["dump_fields"] = s.dump_fields;
    return doc;
}

} // namespace

std::string scenario_to_json(const Scenario& s) {
    return scenario_json(s).dump(2);
}

namespace {

Scenario dent_scenario(const std::string& name, const std::string& desc, double depth,
                       int sharpness) {
    Scenario s;
    s.name = name;
    s.description = desc;
    std::string r = "(1 - " + fmt17(depth) + "*(0.5*(1 + cos(theta - pi)))^" +
                    std::to_string(sharpness) + ")";
    s.phi_x = r + "*cos(theta)";
    s.phi_y = r + "*sin(theta)";
    return s;
}

std::vector<Scenario> make_gallery() {
    std::vector<Scenario> g;

    Scenario identity;
    identity.name = "identity";
    identity.description = "sigma = I, circle boundary data; the harmonic identity map";
    g.push_back(identity);

    Scenario ellipse;
    ellipse.name = "ellipse";
    ellipse.description = "sigma = I onto the ellipse (2 cos, sin); convex target";
    ellipse.phi_x = "2*cos(theta)";
    ellipse.phi_y = "sin(theta)";
    g.push_back(ellipse);

    Scenario aniso;
    aniso.name = "anisotropic-const";
    aniso.description = "constant sigma = diag(1,4) onto the circle";
    aniso.sigma_entries = {"1", "0", "0", "4"};
    aniso.K = 4.0;
    g.push_back(aniso);

    Scenario hoelder;
    hoelder.name = "variable-hoelder";
    hoelder.description = "sigma = (1 + x^2/2) I with a Hoelder tag, ellipse target";
    hoelder.sigma_entries = {"1 + x^2/2", "0", "0", "1 + x^2/2"};
    hoelder.K = 1.5;
    hoelder.smoothness = Smoothness::Hoelder;
    hoelder.phi_x = "1.5*cos(theta)";
    hoelder.phi_y = "sin(theta)";
    g.push_back(hoelder);

    Scenario skew;
    skew.name = "skew";
    skew.description = "sigma = I plus constant skew part 0.3, circle target";
    skew.sigma_entries = {"1", "0.3", "-0.3", "1"};
    skew.K = 1.2;
    g.push_back(skew);

    g.push_back(dent_scenario("choquet-mild",
                              "harmonic map onto a mildly dented, non-convex curve", 0.30, 6));
    g.push_back(dent_scenario(
        "choquet-strong",
        "harmonic map onto a strongly dented curve; the boundary Jacobian changes sign", 0.92,
        12));
    g.push_back(dent_scenario(
        "dent-hopf", "non-convex target with positive boundary Jacobian on the dent arcs", 0.25,
        8));
    return g;
}

} // namespace

const std::vector<Scenario>& gallery() {
    static const std::vector<Scenario> g = make_gallery();
    return g;
}

const Scenario& gallery_scenario(const std::string& name) {
    for (const auto& s : gallery())
        if (s.name == name)
            return s;
    throw ScenarioError("unknown gallery scenario '" + name + "'");
}

namespace {

json interval_list(const std::vector<ThetaInterval>& ivs) {
    json arr = json::array();
    for (const auto& iv : ivs)
        arr.push_back({iv.first, iv.second});
    return arr;
}

json certificate_json(const CertificateReport& rep) {
    json c;
    c["verdict"] = to_string(rep.verdict);
    c["min_boundary_det"] = rep.min_boundary_det;
    c["boundary_det_tol"] = rep.boundary_det_tol;
    if (rep.nc_min_det)
        c["nc_min_det"] = *rep.nc_min_det;
    else
        c["nc_min_det"] = nullptr;
    c["nc_arcs"] = interval_list(rep.nc_arcs);
    c["interior_min_det"] = rep.interior_min_det;
    c["fold_triangle_count"] = rep.fold_triangle_count;
    c["low_confidence_vertices"] = rep.low_confidence_vertices;
    if (rep.topology) {
        const TopologyReport& t = *rep.topology;
        json topo;
        topo["alphas"] = t.sweep.alphas;
        topo["counts"] = t.sweep.counts;
        topo["defined"] = json::array();
        for (char d : t.sweep.defined)
            topo["defined"].push_back(static_cast<bool>(d));
        topo["constant"] = t.sweep.constant;
        topo["M"] = t.sweep.M;
        topo["wn_f"] = t.identities.wn_f;
        topo["wn_phi"] = t.identities.wn_phi;
        topo["m_plus_one_holds"] = t.identities.m_plus_one_holds;
        topo["wn_phi_is_one"] = t.identities.wn_phi_is_one;
        if (t.xi_count)
            topo["xi_count"] = *t.xi_count;
        else
            topo["xi_count"] = nullptr;
        topo["counters_agree"] = t.counters_agree;
        topo["homotopy_min_boundary_det"] = t.homotopy.min_boundary_det;
        topo["diagnostics"] = t.diagnostics;
        c["topology"] = topo;
    } else {
        c["topology"] = nullptr;
    }
    if (rep.injectivity) {
        const InjectivitySummary& i = *rep.injectivity;
        json inj;
        inj["n_probe"] = i.n_probe;
        inj["bad_winding"] = i.bad_winding;
        inj["collision_count"] = i.collision_count;
        inj["collisions"] = json::array();
        for (const auto& p : i.collisions)
            inj["collisions"].push_back({{"vertex_a", p.vertex_a},
                                         {"vertex_b", p.vertex_b},
                                         {"preimage_distance", p.preimage_distance},
                                         {"image_distance", p.image_distance}});
        c["injectivity"] = inj;
    } else {
        c["injectivity"] = nullptr;
    }
    c["diagnostics"] = rep.diagnostics;
    return c;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ScenarioError("cannot write '" + path + "'");
    out << content;
}

bool has_check(const Scenario& s, const std::string& name) {
    return std::find(s.checks.begin(), s.checks.end(), name) != s.checks.end();
}

} // namespace

RunResult run_scenario(const Scenario& scenario, const std::string& out_dir) {
    namespace fs = std::filesystem;
    RunResult result;
    fs::create_directories(out_dir);

    SigmaField sigma =
        SigmaField::from_exprs(scenario.sigma_entries, scenario.K, scenario.smoothness);
    BoundaryMap phi;
    if (!scenario.points_file.empty()) {
        std::ifstream in(scenario.points_file);
        if (!in)
            throw ScenarioError("cannot open points_file '" + scenario.points_file + "'");
        std::vector<std::array<double, 3>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.starts_with("theta"))
                continue;
            std::array<double, 3> row;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &row[0], &row[1], &row[2]) != 3)
                throw ScenarioError("bad CSV row in points_file: " + line);
            rows.push_back(row);
        }
        phi = BoundaryMap::from_points(rows);
    } else {
        phi = BoundaryMap::from_exprs(scenario.phi_x, scenario.phi_y);
    }
    DiskMesh mesh = build_disk_mesh(scenario.resolution, scenario.grading);

    std::vector<Vec2> sample_points = mesh.vertices;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
        sample_points.push_back(mesh.barycenter(t));
    EllipticityCertificate ell =
        check_ellipticity(sigma, sample_points, 32, scenario.ellipticity_tol);
    if (!ell.pass)
        throw ScenarioError("sigma fails the declared ellipticity constant K = " +
                            fmt17(sigma.K()));
    BeltramiPair beltrami = beltrami_pair(sigma, sample_points);

    json report;
    report["schema_version"] = 1;
    report["scenario"] = scenario_json(scenario);
    report["mesh"] = {{"n_boundary", scenario.resolution},
                      {"n_vertices", mesh.vertices.size()},
                      {"n_triangles", mesh.triangles.size()},
                      {"h", mesh.h}};
    report["ellipticity"] = {{"min_quad", ell.min_quad},
                             {"min_inv_quad", ell.min_inv_quad},
                             {"min_det", ell.min_det},
                             {"pass", ell.pass}};
    report["beltrami_k_bound"] = beltrami.k_bound;

    std::optional<CertificateReport> main_cert, nc_cert;
    if (has_check(scenario, "main"))
        main_cert = certify_main(sigma, phi, mesh, scenario.boundary_det_tol, scenario.n_alpha);
    if (has_check(scenario, "nonconvex"))
        nc_cert =
            certify_nonconvex(sigma, phi, mesh, scenario.boundary_det_tol, scenario.n_alpha);
    report["main"] = main_cert ? certificate_json(*main_cert) : json(nullptr);
    report["nonconvex"] = nc_cert ? certificate_json(*nc_cert) : json(nullptr);

    if (has_check(scenario, "topology") || scenario.dump_fields) {
        DiscreteMapping mapping = solve_mapping(sigma, mesh, phi);
        StreamFunction v1 = stream_function(sigma, mapping.u1, mesh);
        ComplexMap fmap = complex_map(mapping.u1, v1, mesh);
        BeltramiResidual res = beltrami_residual(fmap, sigma, mesh);
        report["conjugate"] = {{"loop_residual", v1.loop_residual},
                               {"v_range", v1.vertex_values.maxCoeff() -
                                               v1.vertex_values.minCoeff()},
                               {"beltrami_residual_max", res.max},
                               {"beltrami_residual_max_interior", res.max_interior},
                               {"max_abs_fz", res.max_abs_fz}};
        if (scenario.dump_fields) {
            std::ostringstream csv;
            csv << "x,y,u1,u2,v1\n";
            for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v)
                csv << fmt17(mesh.vertices[v].x()) << ',' << fmt17(mesh.vertices[v].y()) << ','
                    << fmt17(mapping.u1.vertex_values(v)) << ','
                    << fmt17(mapping.u2.vertex_values(v)) << ','
                    << fmt17(v1.vertex_values(v)) << '\n';
            write_file(out_dir + "/fields.csv", csv.str());
        }
    }

    const CertificateReport* primary =
        main_cert ? &*main_cert : (nc_cert ? &*nc_cert : nullptr);
    if (primary) {
        std::ostringstream csv;
        csv << "theta,det_DU,confidence\n";
        for (int j = 0; j < static_cast<int>(primary->boundary_thetas.size()); ++j)
            csv << fmt17(primary->boundary_thetas[j]) << ',' << fmt17(primary->boundary_profile(j))
                << ',' << (primary->boundary_confidence[j] ? "low" : "ok") << '\n';
        write_file(out_dir + "/boundary_profile.csv", csv.str());

        if (primary->topology) {
            std::ostringstream csv2;
            csv2 << "alpha,M_alpha\n";
            const AlphaSweep& sw = primary->topology->sweep;
            for (size_t i = 0; i < sw.alphas.size(); ++i)
                csv2 << fmt17(sw.alphas[i]) << ',' << sw.counts[i] << '\n';
            write_file(out_dir + "/alpha_sweep.csv", csv2.str());
        }
        result.verdict = to_string(primary->verdict);
        result.exit_status = exit_code(primary->verdict);
    } else {
        result.verdict = "none";
        result.exit_status = 0;
    }

    result.report_path = out_dir + "/report.json";
    write_file(result.report_path, report.dump(2) + "\n");
    return result;
}

} // namespace certify
