// Acceptance sweep: one line per criterion, nonzero exit when any fails.
#include "certify/certify.hpp"
#include "certify/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace certify;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& detail) {
    std::printf("criterion %d %-4s %s (%s)\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!ok)
        ++failures;
}

SigmaField scenario_sigma(const Scenario& s) {
    return SigmaField::from_exprs(s.sigma_entries, s.K, s.smoothness);
}

BoundaryMap scenario_phi(const Scenario& s) {
    return BoundaryMap::from_exprs(s.phi_x, s.phi_y);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1. identity scenario at n = 256: diffeomorphism with unit boundary det,
//    zero critical counts, unit winding, under five seconds
void criterion_identity() {
    auto t0 = std::chrono::steady_clock::now();
    DiskMesh mesh = build_disk_mesh(256);
    CertificateReport rep = certify_main(
        SigmaField::identity(), BoundaryMap::from_exprs("cos(theta)", "sin(theta)"), mesh);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = rep.verdict == Verdict::Diffeomorphism && rep.min_boundary_det >= 0.98 &&
              rep.min_boundary_det <= 1.02 && rep.topology.has_value() && seconds < 5.0;
    if (ok) {
        for (size_t i = 0; i < rep.topology->sweep.counts.size(); ++i)
            ok = ok && rep.topology->sweep.defined[i] && rep.topology->sweep.counts[i] == 0;
        ok = ok && rep.topology->sweep.alphas.size() == 16;
        ok = ok && rep.topology->identities.wn_f == 1;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "verdict=%s min_boundary_det=%.6f wn_f=%d runtime=%.2fs",
                  to_string(rep.verdict).c_str(), rep.min_boundary_det,
                  rep.topology ? rep.topology->identities.wn_f : -99, seconds);
    report(1, "identity scenario", ok, detail);
}

// 2. manufactured harmonic solution: sup error drops >= 3.5x from n=128 to n=256
void criterion_convergence() {
    auto sup_err = [](int n) {
        DiskMesh mesh = build_disk_mesh(n);
        ScalarField u = solve_dirichlet(SigmaField::identity(), mesh,
                                        [](double th) { return std::cos(2.0 * th); });
        double worst = 0.0;
        for (size_t i = 0; i < mesh.vertices.size(); ++i) {
            const Vec2& p = mesh.vertices[i];
            worst = std::max(worst,
                             std::abs(u.vertex_values(i) - (p.x() * p.x() - p.y() * p.y())));
        }
        return worst;
    };
    double coarse = sup_err(128), fine = sup_err(256);
    double ratio = coarse / fine;
    char detail[120];
    std::snprintf(detail, sizeof(detail), "err(128)=%.3e err(256)=%.3e ratio=%.2f", coarse,
                  fine, ratio);
    report(2, "manufactured-solution convergence", ratio >= 3.5, detail);
}

// 3. det A = 1 at 1e4 points for the Lipschitz-or-better gallery fields;
//    |mu|+|nu| < 1 - 1e-3 at all barycenters for every gallery field
void criterion_pointwise_algebra() {
    bool ok = true;
    std::string detail;
    DiskMesh mesh = build_disk_mesh(128);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Vec2> cloud;
    while (cloud.size() < 10000) {
        Vec2 p(unit(rng), unit(rng));
        if (p.norm() <= 1.0)
            cloud.push_back(p);
    }

    for (const Scenario& s : gallery()) {
        SigmaField sigma = scenario_sigma(s);
        if (sigma.smoothness() != Smoothness::Hoelder) {
            AbForm ab = reduce_to_ab(sigma, mesh.h);
            double worst = 0.0;
            for (const Vec2& p : cloud)
                worst = std::max(worst, std::abs(ab.A(p.x(), p.y()).determinant() - 1.0));
            if (worst > 1e-12) {
                ok = false;
                detail += s.name + ": |det A - 1| = " + std::to_string(worst) + "; ";
            }
        }
        double k_worst = 0.0;
        for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
            auto [mu, nu] = beltrami_dilatations(sigma, mesh.barycenter(t));
            k_worst = std::max(k_worst, std::abs(mu) + std::abs(nu));
        }
        if (!(k_worst < 1.0 - 1e-3)) {
            ok = false;
            detail += s.name + ": |mu|+|nu| = " + std::to_string(k_worst) + "; ";
        }
    }
    if (detail.empty())
        detail = "all gallery fields within bounds";
    report(3, "Ab reduction and dilatation bounds", ok, detail);
}

// 4. stream-function closedness and Beltrami residual at n = 512
void criterion_beltrami_closure() {
    bool ok = true;
    std::string detail;
    for (const Scenario& s : gallery()) {
        SigmaField sigma = scenario_sigma(s);
        BoundaryMap phi = scenario_phi(s);
        DiskMesh mesh = build_disk_mesh(512);
        DiscreteMapping map = solve_mapping(sigma, mesh, phi);
        StreamFunction v = stream_function(sigma, map.u1, mesh);
        double scale = v.vertex_values.maxCoeff() - v.vertex_values.minCoeff();
        ComplexMap f = complex_map(map.u1, v, mesh);
        BeltramiResidual res = beltrami_residual(f, sigma, mesh);
        bool loop_ok = v.loop_residual <= 1e-6 * scale;
        bool res_ok = res.max_interior <= 1e-3 * res.max_abs_fz;
        if (!loop_ok || !res_ok) {
            ok = false;
            detail += s.name + ": loop=" + std::to_string(v.loop_residual / scale) +
                      " res=" + std::to_string(res.max_interior / res.max_abs_fz) + "; ";
        }
    }
    if (detail.empty())
        detail = "loop_residual <= 1e-6 x scale and interior residual <= 1e-3 x max|f_z|";
    report(4, "Beltrami closure on the gallery at n=512", ok, detail);
}

// 5. alpha-sweep constancy and counter agreement wherever the boundary det is positive
void criterion_sweep_constancy() {
    bool ok = true;
    std::string detail;
    for (const Scenario& s : gallery()) {
        DiskMesh mesh = build_disk_mesh(s.resolution);
        SigmaField sigma = scenario_sigma(s);
        DiscreteMapping map = solve_mapping(sigma, mesh, scenario_phi(s));
        if (map.boundary.det.minCoeff() <= 0.0)
            continue; // sign change: the constancy hypotheses fail
        AlphaSweep sweep = alpha_sweep(map, mesh, s.n_alpha);
        bool all_defined = true;
        for (char d : sweep.defined)
            all_defined = all_defined && d;
        if (!all_defined || !sweep.constant) {
            ok = false;
            detail += s.name + ": sweep not constant; ";
            continue;
        }
        int xi = xi_field_count(map, mesh);
        if (xi != sweep.M) {
            ok = false;
            detail += s.name + ": xi=" + std::to_string(xi) + " M=" + std::to_string(sweep.M) +
                      "; ";
        }
    }
    if (detail.empty())
        detail = "constant sweeps, critical_count == xi_field_count";
    report(5, "alpha-sweep constancy and counter agreement", ok, detail);
}

// 6. winding identities and homotopy positivity on the five smooth scenarios
void criterion_winding_identities() {
    bool ok = true;
    std::string detail;
    for (const char* name :
         {"identity", "ellipse", "anisotropic-const", "variable-hoelder", "skew"}) {
        const Scenario& s = gallery_scenario(name);
        DiskMesh mesh = build_disk_mesh(s.resolution);
        SigmaField sigma = scenario_sigma(s);
        BoundaryMap phi = scenario_phi(s);
        DiscreteMapping map = solve_mapping(sigma, mesh, phi);
        StreamFunction v = stream_function(sigma, map.u1, mesh);
        ComplexMap f = complex_map(map.u1, v, mesh);
        AlphaSweep sweep = alpha_sweep(map, mesh, s.n_alpha);
        MPlusOneReport ids = verify_m_plus_one(f, sweep, mesh, phi);
        HomotopyRecord hom = homotopy_check(map, sigma, mesh);
        bool here = ids.m_plus_one_holds && ids.wn_phi_is_one && ids.wn_f == sweep.M + 1 &&
                    hom.min_boundary_det > 0.0;
        if (!here) {
            ok = false;
            detail += std::string(name) + ": wn_f=" + std::to_string(ids.wn_f) +
                      " M=" + std::to_string(sweep.M) + " wn_phi=" +
                      std::to_string(ids.wn_phi) +
                      " hom_min=" + std::to_string(hom.min_boundary_det) + "; ";
        }
    }
    if (detail.empty())
        detail = "WN(f) = M+1, WN(Phi) = 1, homotopy min det > 0";
    report(6, "winding identities and homotopy positivity", ok, detail);
}

// 7. the strong dent must be refuted, with an injectivity witness
void criterion_necessity() {
    const Scenario& s = gallery_scenario("choquet-strong");
    DiskMesh mesh = build_disk_mesh(s.resolution);
    CertificateReport rep = certify_main(scenario_sigma(s), scenario_phi(s), mesh);
    bool verdict_ok =
        rep.verdict == Verdict::BoundaryDegenerate || rep.verdict == Verdict::FoldDetected;
    bool witness = rep.injectivity &&
                   (rep.injectivity->bad_winding > 0 || rep.injectivity->collision_count > 0);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "verdict=%s min_boundary_det=%.4f bad_winding=%d collisions=%d",
                  to_string(rep.verdict).c_str(), rep.min_boundary_det,
                  rep.injectivity ? rep.injectivity->bad_winding : -1,
                  rep.injectivity ? rep.injectivity->collision_count : -1);
    report(7, "strong dent refuted with witness", verdict_ok && witness, detail);
}

// 8. the weakened certificate passes on dent-hopf; convex targets are vacuous
void criterion_hopf() {
    const Scenario& s = gallery_scenario("dent-hopf");
    DiskMesh mesh = build_disk_mesh(s.resolution);
    CertificateReport nc = certify_nonconvex(scenario_sigma(s), scenario_phi(s), mesh);
    bool hopf_ok = nc.verdict == Verdict::Diffeomorphism && !nc.nc_arcs.empty() &&
                   nc.nc_min_det && *nc.nc_min_det > 0.0;

    ConvexDecomposition ell =
        convex_decompose(BoundaryMap::from_exprs("2*cos(theta)", "sin(theta)"));
    bool ellipse_ok = ell.gamma_nc.empty();
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "dent-hopf verdict=%s nc_arcs=%zu nc_min_det=%.4f; ellipse gamma_nc=%zu",
                  to_string(nc.verdict).c_str(), nc.nc_arcs.size(),
                  nc.nc_min_det ? *nc.nc_min_det : -1.0, ell.gamma_nc.size());
    report(8, "non-convex certificate (dent-hopf, ellipse)", hopf_ok && ellipse_ok, detail);
}

// 9. byte-identical reports across repeated runs
void criterion_determinism() {
    Scenario s = gallery_scenario("variable-hoelder");
    fs::path a = fs::temp_directory_path() / "certify-acceptance-a";
    fs::path b = fs::temp_directory_path() / "certify-acceptance-b";
    fs::remove_all(a);
    fs::remove_all(b);
    run_scenario(s, a.string());
    run_scenario(s, b.string());
    bool same = slurp(a / "report.json") == slurp(b / "report.json") &&
                slurp(a / "boundary_profile.csv") == slurp(b / "boundary_profile.csv");
    fs::remove_all(a);
    fs::remove_all(b);
    report(9, "byte-identical reports", same, same ? "two runs compared equal" : "mismatch");
}

} // namespace

int main() {
    criterion_identity();
    criterion_convergence();
    criterion_pointwise_algebra();
    criterion_beltrami_closure();
    criterion_sweep_constancy();
    criterion_winding_identities();
    criterion_necessity();
    criterion_hopf();
    criterion_determinism();
    if (failures == 0)
        std::printf("all 9 criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
