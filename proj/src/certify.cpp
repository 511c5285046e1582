#include "certify/certify.hpp"

#include "certify/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace certify {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Diffeomorphism: return "Diffeomorphism";
    case Verdict::BoundaryDegenerate: return "BoundaryDegenerate";
    case Verdict::FoldDetected: return "FoldDetected";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

int exit_code(Verdict v) {
    switch (v) {
    case Verdict::Diffeomorphism: return 0;
    case Verdict::BoundaryDegenerate: return 10;
    case Verdict::FoldDetected: return 11;
    case Verdict::Inconclusive: return 12;
    }
    return 12;
}

FoldScan interior_fold_scan(const DiscreteMapping& mapping) {
    FoldScan scan;
    scan.interior_min_det = std::numeric_limits<double>::infinity();
    for (int t = 0; t < static_cast<int>(mapping.tri_jacobians.size()); ++t) {
        double d = mapping.tri_jacobians(t);
        scan.interior_min_det = std::min(scan.interior_min_det, d);
        if (d <= 0.0)
            scan.fold_triangles.push_back(t);
    }
    return scan;
}

namespace {

// winding number of the closed image polyline around a point, by angle sum
int polygon_winding(const std::vector<Vec2>& poly, const Vec2& p) {
    double total = 0.0;
    int n = static_cast<int>(poly.size());
    for (int k = 0; k < n; ++k) {
        Vec2 a = poly[k] - p;
        Vec2 b = poly[(k + 1) % n] - p;
        total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

} // namespace

InjectivitySummary injectivity_oracle(const DiscreteMapping& mapping, const DiskMesh& mesh,
                                      int n_probe) {
    InjectivitySummary sum;

    std::vector<Vec2> image_boundary;
    image_boundary.reserve(mesh.boundary_loop.size());
    for (int v : mesh.boundary_loop)
        image_boundary.emplace_back(mapping.u1.vertex_values(v), mapping.u2.vertex_values(v));

    // probe targets: images of deterministically spread interior vertices
    std::vector<int> interior;
    for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v)
        if (!mesh.is_boundary[v])
            interior.push_back(v);
    int stride = std::max<size_t>(1, interior.size() / n_probe);
    std::vector<int> probes;
    for (size_t i = 0; i < interior.size() && static_cast<int>(probes.size()) < n_probe;
         i += stride)
        probes.push_back(interior[i]);
    sum.n_probe = static_cast<int>(probes.size());

    for (int v : probes) {
        Vec2 target(mapping.u1.vertex_values(v), mapping.u2.vertex_values(v));
        if (polygon_winding(image_boundary, target) != 1) {
            ++sum.bad_winding;
            if (!sum.first_bad_probe_vertex)
                sum.first_bad_probe_vertex = v;
        }
    }

    // collision scan over all vertex images using a uniform hash grid
    double h_img = 0.0;
    {
        std::vector<double> lens;
        lens.reserve(mesh.edges.size());
        for (const auto& e : mesh.edges) {
            Vec2 pa(mapping.u1.vertex_values(e.a), mapping.u2.vertex_values(e.a));
            Vec2 pb(mapping.u1.vertex_values(e.b), mapping.u2.vertex_values(e.b));
            lens.push_back((pa - pb).norm());
        }
        std::nth_element(lens.begin(), lens.begin() + lens.size() / 2, lens.end());
        h_img = lens[lens.size() / 2];
    }
    const double img_tol = 0.5 * h_img;       // near-equal images
    const double pre_tol = 10.0 * mesh.h;     // distant preimages
    const double cell = std::max(img_tol, 1e-300);

    std::unordered_map<long long, std::vector<int>> grid;
    auto key = [cell](const Vec2& p) {
        long long ix = static_cast<long long>(std::floor(p.x() / cell));
        long long iy = static_cast<long long>(std::floor(p.y() / cell));
        return (ix << 32) ^ (iy & 0xffffffffLL);
    };
    std::vector<Vec2> img(mesh.vertices.size());
    for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
        img[v] = Vec2(mapping.u1.vertex_values(v), mapping.u2.vertex_values(v));
        grid[key(img[v])].push_back(v);
    }
    for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                Vec2 shifted = img[v] + Vec2(dx * cell, dy * cell);
                auto it = grid.find(key(shifted));
                if (it == grid.end())
                    continue;
                for (int w : it->second) {
                    if (w <= v)
                        continue;
                    double di = (img[v] - img[w]).norm();
                    double dp = (mesh.vertices[v] - mesh.vertices[w]).norm();
                    if (di < img_tol && dp > pre_tol) {
                        ++sum.collision_count;
                        if (sum.collisions.size() < 20)
                            sum.collisions.push_back({v, w, dp, di});
                    }
                }
            }
        }
    }
    return sum;
}

namespace {

double default_boundary_tol(const Eigen::VectorXd& dets) {
    Eigen::VectorXd mags = dets.cwiseAbs();
    std::vector<double> v(mags.data(), mags.data() + mags.size());
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return 1e-6 * v[v.size() / 2];
}

TopologyReport run_topology(const SigmaField& sigma, const DiscreteMapping& mapping,
                            const DiskMesh& mesh, int n_alpha) {
    TopologyReport topo;
    topo.sweep = alpha_sweep(mapping, mesh, n_alpha);
    for (size_t i = 0; i < topo.sweep.defined.size(); ++i)
        if (!topo.sweep.defined[i])
            topo.diagnostics.push_back("BoundaryCritical at alpha = " +
                                       std::to_string(topo.sweep.alphas[i]));
    try {
        topo.xi_count = xi_field_count(mapping, mesh);
        topo.counters_agree = topo.sweep.constant && topo.sweep.M == *topo.xi_count;
    } catch (const Error& e) {
        topo.diagnostics.push_back(std::string("xi_field_count: ") + e.what());
    }
    topo.homotopy = homotopy_check(mapping, sigma, mesh);
    return topo;
}

CertificateReport certify_impl(const SigmaField& sigma, const BoundaryMap& phi,
                               const DiskMesh& mesh, double tol, int n_alpha,
                               bool nonconvex_only) {
    validate_boundary_map_or_throw(phi);
    DiscreteMapping mapping = solve_mapping(sigma, mesh, phi);

    CertificateReport rep;
    rep.mesh_h = mesh.h;
    rep.boundary_profile = mapping.boundary.det;
    rep.boundary_confidence = mapping.boundary.low_confidence;
    rep.boundary_thetas = mesh.boundary_theta;
    rep.low_confidence_vertices = static_cast<int>(
        std::count(mapping.boundary.low_confidence.begin(),
                   mapping.boundary.low_confidence.end(), 1));
    rep.min_boundary_det = mapping.boundary.det.minCoeff();
    rep.boundary_det_tol = tol < 0.0 ? default_boundary_tol(mapping.boundary.det) : tol;

    bool boundary_ok;
    if (nonconvex_only) {
        ConvexDecomposition decomp = convex_decompose(phi);
        rep.nc_arcs = preimage_arcs(decomp);
        double nc_min = std::numeric_limits<double>::infinity();
        bool any = false;
        for (int j = 0; j < static_cast<int>(mesh.boundary_theta.size()); ++j) {
            for (const auto& iv : rep.nc_arcs) {
                if (theta_in_interval(mesh.boundary_theta[j], iv)) {
                    any = true;
                    nc_min = std::min(nc_min, mapping.boundary.det(j));
                    break;
                }
            }
        }
        if (any)
            rep.nc_min_det = nc_min;
        boundary_ok = !any || nc_min > rep.boundary_det_tol; // void condition for convex targets
        if (!boundary_ok) {
            for (const auto& iv : rep.nc_arcs) {
                bool fails = false;
                for (int j = 0; j < static_cast<int>(mesh.boundary_theta.size()); ++j)
                    if (theta_in_interval(mesh.boundary_theta[j], iv) &&
                        mapping.boundary.det(j) <= rep.boundary_det_tol)
                        fails = true;
                if (fails)
                    rep.diagnostics.push_back(
                        "det DU <= tol on non-convex arc [" + std::to_string(iv.first) + ", " +
                        std::to_string(iv.second) + "]");
            }
        }
    } else {
        boundary_ok = rep.min_boundary_det > rep.boundary_det_tol;
    }

    // corroborating evidence is gathered even when the boundary check fails
    FoldScan scan = interior_fold_scan(mapping);
    rep.interior_min_det = scan.interior_min_det;
    rep.fold_triangle_count = static_cast<int>(scan.fold_triangles.size());
    rep.injectivity = injectivity_oracle(mapping, mesh);

    if (!boundary_ok) {
        rep.verdict = Verdict::BoundaryDegenerate;
        return rep;
    }

    bool topo_ok = false;
    try {
        ScalarField& u1 = mapping.u1;
        StreamFunction v1 = stream_function(sigma, u1, mesh);
        ComplexMap fmap = complex_map(u1, v1, mesh);
        TopologyReport topo = run_topology(sigma, mapping, mesh, n_alpha);
        topo.identities = verify_m_plus_one(fmap, topo.sweep, mesh, phi);
        topo_ok = topo.sweep.constant && topo.sweep.M == 0 && topo.counters_agree &&
                  topo.identities.m_plus_one_holds && topo.identities.wn_phi_is_one &&
                  topo.homotopy.min_boundary_det > 0.0;
        rep.topology = std::move(topo);
    } catch (const Error& e) {
        rep.diagnostics.push_back(std::string("topology: ") + e.what());
    }

    bool interior_ok = scan.fold_triangles.empty();
    bool injective_ok = rep.injectivity->bad_winding == 0 && rep.injectivity->collision_count == 0;

    if (topo_ok && interior_ok && injective_ok) {
        rep.verdict = Verdict::Diffeomorphism;
    } else if (!interior_ok) {
        // a theorem violation at the discrete level: boundary positive yet
        // interior folds exist
        rep.verdict = Verdict::FoldDetected;
        rep.diagnostics.push_back("boundary det positive but " +
                                  std::to_string(rep.fold_triangle_count) +
                                  " triangles have det DU <= 0; refine the mesh");
    } else {
        rep.verdict = Verdict::Inconclusive;
        if (!injective_ok)
            rep.diagnostics.push_back("injectivity oracle reported evidence against injectivity");
        if (!topo_ok)
            rep.diagnostics.push_back("topological identities failed or were undefined");
        rep.diagnostics.push_back("suggest rerunning at doubled resolution");
    }
    return rep;
}

} // namespace

CertificateReport certify_main(const SigmaField& sigma, const BoundaryMap& phi,
                               const DiskMesh& mesh, double tol, int n_alpha) {
    return certify_impl(sigma, phi, mesh, tol, n_alpha, false);
}

CertificateReport certify_nonconvex(const SigmaField& sigma, const BoundaryMap& phi,
                                    const DiskMesh& mesh, double tol, int n_alpha) {
    return certify_impl(sigma, phi, mesh, tol, n_alpha, true);
}

} // namespace certify
