#pragma once

#include "certify/conjugate.hpp"
#include "certify/geometry.hpp"
#include "certify/solver.hpp"
#include "certify/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace certify {

enum class Verdict { Diffeomorphism, BoundaryDegenerate, FoldDetected, Inconclusive };

std::string to_string(Verdict v);
int exit_code(Verdict v);

struct FoldScan {
    std::vector<int> fold_triangles; // det DU <= 0
    double interior_min_det = 0.0;
};

FoldScan interior_fold_scan(const DiscreteMapping& mapping);

struct CollisionPair {
    int vertex_a = 0;
    int vertex_b = 0;
    double preimage_distance = 0.0;
    double image_distance = 0.0;
};

struct InjectivitySummary {
    int n_probe = 0;
    int bad_winding = 0;              // probes whose boundary-image winding != 1
    std::optional<int> first_bad_probe_vertex;
    std::vector<CollisionPair> collisions; // capped at 20 entries
    int collision_count = 0;
};

/// Brute-force corroboration: degree-one covering of probe targets by the
/// image boundary loop, plus a collision scan over vertex images.
InjectivitySummary injectivity_oracle(const DiscreteMapping& mapping, const DiskMesh& mesh,
                                      int n_probe = 64);

struct TopologyReport {
    AlphaSweep sweep;
    MPlusOneReport identities;
    HomotopyRecord homotopy;
    std::optional<int> xi_count;
    bool counters_agree = false;
    std::vector<std::string> diagnostics;
};

struct CertificateReport {
    Verdict verdict = Verdict::Inconclusive;
    double min_boundary_det = 0.0;
    std::optional<double> nc_min_det;    // only for the non-convex check
    std::vector<ThetaInterval> nc_arcs;  // checked arcs (non-convex certificate)
    std::optional<TopologyReport> topology;
    double interior_min_det = 0.0;
    int fold_triangle_count = 0;
    std::optional<InjectivitySummary> injectivity;
    double boundary_det_tol = 0.0;
    double mesh_h = 0.0;
    int low_confidence_vertices = 0;
    std::vector<std::string> diagnostics;
    // kept for CSV export
    Eigen::VectorXd boundary_profile;
    std::vector<char> boundary_confidence;
    std::vector<double> boundary_thetas;
};

/// The main decision procedure: boundary positivity of det DU, then the
/// corroboration chain (alpha sweep, winding identities, homotopy, interior
/// scan, injectivity oracle). tol < 0 selects 1e-6 x median |boundary det|.
CertificateReport certify_main(const SigmaField& sigma, const BoundaryMap& phi,
                               const DiskMesh& mesh, double tol = -1.0, int n_alpha = 16);

/// The weakened certificate: det DU > tol is required only on the preimage of
/// the non-convex part of the target boundary; void for convex targets.
CertificateReport certify_nonconvex(const SigmaField& sigma, const BoundaryMap& phi,
                                    const DiskMesh& mesh, double tol = -1.0, int n_alpha = 16);

} // namespace certify
