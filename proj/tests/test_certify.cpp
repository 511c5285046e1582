#include "certify/certify.hpp"
#include "certify/errors.hpp"
#include "certify/scenario.hpp"

#include <doctest.h>

#include <cmath>

using namespace certify;

namespace {

SigmaField scenario_sigma(const Scenario& s) {
    return SigmaField::from_exprs(s.sigma_entries, s.K, s.smoothness);
}

BoundaryMap scenario_phi(const Scenario& s) {
    return BoundaryMap::from_exprs(s.phi_x, s.phi_y);
}

} // namespace

TEST_CASE("verdict strings and exit codes") {
    CHECK(to_string(Verdict::Diffeomorphism) == "Diffeomorphism");
    CHECK(to_string(Verdict::BoundaryDegenerate) == "BoundaryDegenerate");
    CHECK(to_string(Verdict::FoldDetected) == "FoldDetected");
    CHECK(to_string(Verdict::Inconclusive) == "Inconclusive");
    CHECK(exit_code(Verdict::Diffeomorphism) == 0);
    CHECK(exit_code(Verdict::BoundaryDegenerate) == 10);
    CHECK(exit_code(Verdict::FoldDetected) == 11);
    CHECK(exit_code(Verdict::Inconclusive) == 12);
}

TEST_CASE("identity certifies as a diffeomorphism") {
    DiskMesh mesh = build_disk_mesh(96);
    BoundaryMap phi = BoundaryMap::from_exprs("cos(theta)", "sin(theta)");
    CertificateReport rep = certify_main(SigmaField::identity(), phi, mesh);
    CHECK(rep.verdict == Verdict::Diffeomorphism);
    CHECK(rep.min_boundary_det == doctest::Approx(1.0).epsilon(1e-4));
    REQUIRE(rep.topology.has_value());
    CHECK(rep.topology->sweep.M == 0);
    CHECK(rep.topology->identities.m_plus_one_holds);
    CHECK(rep.topology->counters_agree);
    CHECK(rep.fold_triangle_count == 0);
    REQUIRE(rep.injectivity.has_value());
    CHECK(rep.injectivity->bad_winding == 0);
    CHECK(rep.injectivity->collision_count == 0);
    CHECK(rep.low_confidence_vertices == 0);
}

TEST_CASE("convex targets certify under variable coefficients") {
    DiskMesh mesh = build_disk_mesh(96);
    BoundaryMap ellipse = BoundaryMap::from_exprs("2*cos(theta)", "sin(theta)");
    SigmaField sigma =
        SigmaField::from_exprs({"1 + x^2/2", "0", "0", "1"}, 1.5, Smoothness::Hoelder);
    CertificateReport rep = certify_main(sigma, ellipse, mesh);
    CHECK(rep.verdict == Verdict::Diffeomorphism);
    CHECK(rep.interior_min_det > 0.0);
}

TEST_CASE("interior fold scan on clean mappings") {
    DiskMesh mesh = build_disk_mesh(64);
    DiscreteMapping ident =
        solve_mapping(SigmaField::identity(), mesh,
                      BoundaryMap::from_exprs("cos(theta)", "sin(theta)"));
    FoldScan scan = interior_fold_scan(ident);
    CHECK(scan.fold_triangles.empty());
    CHECK(scan.interior_min_det == doctest::Approx(1.0).epsilon(1e-6));

    DiscreteMapping ell =
        solve_mapping(SigmaField::identity(), mesh,
                      BoundaryMap::from_exprs("2*cos(theta)", "sin(theta)"));
    FoldScan scan2 = interior_fold_scan(ell);
    CHECK(scan2.fold_triangles.empty());
    CHECK(scan2.interior_min_det == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("injectivity oracle accepts injective mappings") {
    DiskMesh mesh = build_disk_mesh(64);
    DiscreteMapping map =
        solve_mapping(SigmaField::identity(), mesh,
                      BoundaryMap::from_exprs("2*cos(theta)", "sin(theta)"));
    InjectivitySummary inj = injectivity_oracle(map, mesh);
    CHECK(inj.n_probe > 0);
    CHECK(inj.bad_winding == 0);
    CHECK(inj.collision_count == 0);
    CHECK_FALSE(inj.first_bad_probe_vertex.has_value());
}

TEST_CASE("strong dent fails with corroborating evidence") {
    const Scenario& strong = gallery_scenario("choquet-strong");
    DiskMesh mesh = build_disk_mesh(128);
    CertificateReport rep = certify_main(scenario_sigma(strong), scenario_phi(strong), mesh);
    CHECK((rep.verdict == Verdict::BoundaryDegenerate || rep.verdict == Verdict::FoldDetected));
    CHECK(rep.min_boundary_det <= rep.boundary_det_tol);
    REQUIRE(rep.injectivity.has_value());
    CHECK((rep.injectivity->bad_winding > 0 || rep.injectivity->collision_count > 0));
    CHECK(rep.fold_triangle_count > 0);
}

TEST_CASE("nonconvex certificate is vacuous for convex targets") {
    DiskMesh mesh = build_disk_mesh(64);
    BoundaryMap ellipse = BoundaryMap::from_exprs("2*cos(theta)", "sin(theta)");
    CertificateReport rep = certify_nonconvex(SigmaField::identity(), ellipse, mesh);
    CHECK(rep.verdict == Verdict::Diffeomorphism);
    CHECK(rep.nc_arcs.empty());
    CHECK_FALSE(rep.nc_min_det.has_value());
}

TEST_CASE("nonconvex certificate checks the dent arcs") {
    const Scenario& hopf = gallery_scenario("dent-hopf");
    DiskMesh mesh = build_disk_mesh(128);
    CertificateReport rep = certify_nonconvex(scenario_sigma(hopf), scenario_phi(hopf), mesh);
    CHECK(rep.verdict == Verdict::Diffeomorphism);
    CHECK_FALSE(rep.nc_arcs.empty());
    REQUIRE(rep.nc_min_det.has_value());
    CHECK(*rep.nc_min_det > 0.0);
}

TEST_CASE("nonconvex is never stricter than the main certificate") {
    const Scenario& mild = gallery_scenario("choquet-mild");
    DiskMesh mesh = build_disk_mesh(96);
    SigmaField sigma = scenario_sigma(mild);
    BoundaryMap phi = scenario_phi(mild);
    CertificateReport main_rep = certify_main(sigma, phi, mesh);
    CertificateReport nc_rep = certify_nonconvex(sigma, phi, mesh);
    REQUIRE(main_rep.verdict == Verdict::Diffeomorphism);
    CHECK(nc_rep.verdict == Verdict::Diffeomorphism);
    // the weakened boundary minimum can only be taken over fewer vertices
    if (nc_rep.nc_min_det)
        CHECK(*nc_rep.nc_min_det >= main_rep.min_boundary_det - 1e-12);
}

TEST_CASE("certificate stability under refinement") {
    const Scenario& mild = gallery_scenario("choquet-mild");
    SigmaField sigma = scenario_sigma(mild);
    BoundaryMap phi = scenario_phi(mild);
    for (int n : {96, 192}) {
        DiskMesh mesh = build_disk_mesh(n);
        CHECK(certify_main(sigma, phi, mesh).verdict == Verdict::Diffeomorphism);
    }
}

TEST_CASE("invalid boundary data is rejected up front") {
    DiskMesh mesh = build_disk_mesh(64);
    BoundaryMap reversed = BoundaryMap::from_exprs("cos(theta)", "-sin(theta)");
    CHECK_THROWS_AS(certify_main(SigmaField::identity(), reversed, mesh), OrientationReversed);
}
