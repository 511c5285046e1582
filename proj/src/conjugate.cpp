#include "certify/conjugate.hpp"

#include "certify/errors.hpp"

#include <cmath>
#include <queue>

namespace certify {

// The discrete stream function is integrated between edge midpoints through
// triangle interiors, where grad v = J sigma grad u is constant. Around any
// interior vertex the circulation of these increments telescopes to that
// vertex's discrete equation residual, so closedness is exact (to rounding)
// whenever u is a discrete solution. Vertex values extrapolate the
// per-triangle linear function and average over the incident triangles.
StreamFunction stream_function(const SigmaField& sigma, const ScalarField& u, const DiskMesh& mesh,
                               int base_vertex, double tol) {
    int nv = static_cast<int>(mesh.vertices.size());
    int ne = static_cast<int>(mesh.edges.size());
    int nt = static_cast<int>(mesh.triangles.size());
    if (base_vertex < 0)
        base_vertex = mesh.boundary_loop[0];

    // rotated flux J sigma grad u, constant per triangle
    std::vector<Vec2> flux(nt);
    for (int t = 0; t < nt; ++t) {
        Vec2 q = sigma.at(mesh.barycenter(t)) * u.tri_gradients[t];
        flux[t] = Vec2(-q.y(), q.x());
    }

    std::vector<Vec2> midpoint(ne);
    for (int e = 0; e < ne; ++e)
        midpoint[e] = 0.5 * (mesh.vertices[mesh.edges[e].a] + mesh.vertices[mesh.edges[e].b]);

    // breadth-first integration over the midpoint graph (nodes = mesh edges,
    // links = pairs of edges sharing a triangle)
    std::vector<double> vm(ne, 0.0);
    std::vector<char> seen(ne, 0);
    StreamFunction sf;
    sf.base_vertex = base_vertex;

    int root = mesh.triangle_edges[mesh.vertex_triangles[base_vertex].front()][0];
    seen[root] = 1;
    std::queue<int> queue;
    queue.push(root);
    std::vector<std::vector<int>> edge_triangles(ne);
    for (int t = 0; t < nt; ++t)
        for (int e : mesh.triangle_edges[t])
            edge_triangles[e].push_back(t);

    while (!queue.empty()) {
        int e = queue.front();
        queue.pop();
        for (int t : edge_triangles[e]) {
            for (int e2 : mesh.triangle_edges[t]) {
                if (seen[e2])
                    continue;
                vm[e2] = vm[e] + flux[t].dot(midpoint[e2] - midpoint[e]);
                seen[e2] = 1;
                queue.push(e2);
            }
        }
    }

    // closedness over the connections not realized by the traversal
    for (int t = 0; t < nt; ++t) {
        const auto& te = mesh.triangle_edges[t];
        for (int i = 0; i < 3; ++i) {
            int a = te[i], b = te[(i + 1) % 3];
            double mismatch = std::abs(vm[b] - vm[a] - flux[t].dot(midpoint[b] - midpoint[a]));
            sf.loop_residual = std::max(sf.loop_residual, mismatch);
        }
    }

    // vertex values: extrapolate within each incident triangle, then average
    sf.vertex_values = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(nv);
    for (int t = 0; t < nt; ++t) {
        int e0 = mesh.triangle_edges[t][0];
        for (int v : mesh.triangles[t]) {
            sf.vertex_values(v) += vm[e0] + flux[t].dot(mesh.vertices[v] - midpoint[e0]);
            weight(v) += 1.0;
        }
    }
    sf.vertex_values.array() /= weight.array();
    sf.vertex_values.array() -= sf.vertex_values(base_vertex);

    sf.tri_gradients = std::move(flux);

    double scale = sf.vertex_values.maxCoeff() - sf.vertex_values.minCoeff();
    if (scale > 0 && sf.loop_residual > tol * scale)
        throw NonClosedForm("stream function loop residual " + std::to_string(sf.loop_residual) +
                            " exceeds " + std::to_string(tol) + " x field scale " +
                            std::to_string(scale));
    return sf;
}

ComplexMap complex_map(const ScalarField& u, const StreamFunction& v, const DiskMesh& mesh) {
    ComplexMap cm;
    int nv = static_cast<int>(mesh.vertices.size());
    cm.f.resize(nv);
    for (int i = 0; i < nv; ++i)
        cm.f[i] = Complex(u.vertex_values(i), v.vertex_values(i));
    cm.f_z.resize(mesh.triangles.size());
    cm.f_zbar.resize(mesh.triangles.size());
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        Vec2 gu = u.tri_gradients[t];
        Vec2 gv = v.tri_gradients[t];
        cm.f_z[t] = 0.5 * Complex(gu.x() + gv.y(), gv.x() - gu.y());
        cm.f_zbar[t] = 0.5 * Complex(gu.x() - gv.y(), gv.x() + gu.y());
    }
    return cm;
}

BeltramiResidual beltrami_residual(const ComplexMap& fmap, const SigmaField& sigma,
                                   const DiskMesh& mesh) {
    BeltramiResidual res;
    int nt = static_cast<int>(mesh.triangles.size());
    res.per_triangle.resize(nt);
    for (int t = 0; t < nt; ++t) {
        auto [mu, nu] = beltrami_dilatations(sigma, mesh.barycenter(t));
        double r = std::abs(fmap.f_zbar[t] - mu * fmap.f_z[t] - nu * std::conj(fmap.f_z[t]));
        res.per_triangle(t) = r;
        res.max = std::max(res.max, r);
        res.max_abs_fz = std::max(res.max_abs_fz, std::abs(fmap.f_z[t]));
        if (mesh.triangle_ring[t] <= mesh.n_rings - 2)
            res.max_interior = std::max(res.max_interior, r);
    }
    return res;
}

} // namespace certify
