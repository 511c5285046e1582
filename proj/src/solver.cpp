#include "certify/solver.hpp"

#include "certify/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <cmath>

namespace certify {

AssembledSystem assemble(const SigmaField& sigma, const DiskMesh& mesh) {
    int nv = static_cast<int>(mesh.vertices.size());
    AssembledSystem sys;
    sys.interior_of_vertex.assign(nv, -1);
    sys.boundary_of_vertex.assign(nv, -1);
    for (int j = 0; j < static_cast<int>(mesh.boundary_loop.size()); ++j)
        sys.boundary_of_vertex[mesh.boundary_loop[j]] = j;
    for (int v = 0; v < nv; ++v) {
        if (sys.boundary_of_vertex[v] < 0) {
            sys.interior_of_vertex[v] = static_cast<int>(sys.vertex_of_interior.size());
            sys.vertex_of_interior.push_back(v);
        }
    }
    int ni = static_cast<int>(sys.vertex_of_interior.size());
    int nb = static_cast<int>(mesh.boundary_loop.size());

    std::vector<Eigen::Triplet<double>> ti, tc;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        double A = mesh.area(t);
        Mat2 sig = sigma.at(mesh.barycenter(t));
        // gradients of the three basis functions
        Vec2 g[3];
        for (int e = 0; e < 3; ++e) {
            double w[3] = {0, 0, 0};
            w[e] = 1.0;
            g[e] = mesh.p1_gradient(t, w[0], w[1], w[2]);
        }
        for (int i = 0; i < 3; ++i) {
            int vi = tri[i];
            int row = sys.interior_of_vertex[vi];
            if (row < 0)
                continue;
            for (int j = 0; j < 3; ++j) {
                int vj = tri[j];
                double k = A * g[i].dot(sig * g[j]);
                if (sys.interior_of_vertex[vj] >= 0)
                    ti.emplace_back(row, sys.interior_of_vertex[vj], k);
                else
                    tc.emplace_back(row, sys.boundary_of_vertex[vj], k);
            }
        }
    }
    sys.interior.resize(ni, ni);
    sys.interior.setFromTriplets(ti.begin(), ti.end());
    sys.coupling.resize(ni, nb);
    sys.coupling.setFromTriplets(tc.begin(), tc.end());
    return sys;
}

ScalarField solve_dirichlet(const AssembledSystem& sys, const DiskMesh& mesh,
                            const std::function<double(double)>& g) {
    int nb = static_cast<int>(mesh.boundary_loop.size());
    Eigen::VectorXd gb(nb);
    for (int j = 0; j < nb; ++j)
        gb(j) = g(mesh.boundary_theta[j]);

    Eigen::VectorXd rhs = -(sys.coupling * gb);
    Eigen::VectorXd ui;
    double load = rhs.norm();

    bool use_iterative = nb >= 1024;
    bool solved = false;
    if (use_iterative) {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(1e-13);
        it.setMaxIterations(4000);
        it.compute(sys.interior);
        if (it.info() == Eigen::Success) {
            ui = it.solve(rhs);
            solved = it.info() == Eigen::Success;
        }
    }
    if (!solved) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(sys.interior);
        if (lu.info() != Eigen::Success)
            throw SingularSystem("sparse LU factorization failed");
        ui = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw SingularSystem("sparse LU solve failed");
    }

    double resid = (sys.interior * ui - rhs).norm();
    if (load > 0 && resid > 1e-10 * load)
        throw SolverDiverged("residual " + std::to_string(resid) + " exceeds 1e-10 x load norm " +
                             std::to_string(load));

    ScalarField field;
    field.vertex_values.resize(mesh.vertices.size());
    for (int v = 0; v < static_cast<int>(mesh.vertices.size()); ++v) {
        if (sys.interior_of_vertex[v] >= 0)
            field.vertex_values(v) = ui(sys.interior_of_vertex[v]);
        else
            field.vertex_values(v) = gb(sys.boundary_of_vertex[v]);
    }
    field.dirichlet_trace = gb;
    field.tri_gradients.resize(mesh.triangles.size());
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        field.tri_gradients[t] =
            mesh.p1_gradient(t, field.vertex_values(tri[0]), field.vertex_values(tri[1]),
                             field.vertex_values(tri[2]));
    }
    return field;
}

ScalarField solve_dirichlet(const SigmaField& sigma, const DiskMesh& mesh,
                            const std::function<double(double)>& g) {
    return solve_dirichlet(assemble(sigma, mesh), mesh, g);
}

BoundaryJacobianProfile boundary_jacobian(const DiscreteMapping& mapping, const DiskMesh& mesh,
                                          const BoundaryMap& phi) {
    int nb = static_cast<int>(mesh.boundary_loop.size());
    BoundaryJacobianProfile prof;
    prof.det.resize(nb);
    prof.low_confidence.assign(nb, 0);
    prof.grad_u1.resize(nb);
    prof.grad_u2.resize(nb);

    for (int j = 0; j < nb; ++j) {
        int v = mesh.boundary_loop[j];
        double theta = mesh.boundary_theta[j];
        Vec2 n(std::cos(theta), std::sin(theta));
        Vec2 tau(-std::sin(theta), std::cos(theta));

        // area-weighted normal derivative from the incident triangles
        double dn[2] = {0.0, 0.0};
        double wsum = 0.0;
        const std::vector<Vec2>* grads[2] = {&mapping.u1.tri_gradients, &mapping.u2.tri_gradients};
        Vec2 avg[2] = {Vec2::Zero(), Vec2::Zero()};
        for (int t : mesh.vertex_triangles[v]) {
            double w = mesh.area(t);
            wsum += w;
            for (int c = 0; c < 2; ++c) {
                dn[c] += w * (*grads[c])[t].dot(n);
                avg[c] += w * (*grads[c])[t];
            }
        }
        for (int c = 0; c < 2; ++c) {
            dn[c] /= wsum;
            avg[c] /= wsum;
        }
        // gradient disagreement flag
        for (int c = 0; c < 2 && !prof.low_confidence[j]; ++c) {
            double scale = std::max(avg[c].norm(), 1e-14);
            for (int t : mesh.vertex_triangles[v]) {
                if (((*grads[c])[t] - avg[c]).norm() > 0.5 * scale) {
                    prof.low_confidence[j] = 1;
                    break;
                }
            }
        }

        // tangential derivative from the exact boundary data; arc length
        // equals theta on the unit circle
        Vec2 dtau = phi.derivative(theta);
        prof.grad_u1[j] = n * dn[0] + tau * dtau.x();
        prof.grad_u2[j] = n * dn[1] + tau * dtau.y();
        // det in the orthonormal (n, tau) frame
        prof.det(j) = dn[0] * dtau.y() - dn[1] * dtau.x();
    }
    return prof;
}

DiscreteMapping solve_mapping(const SigmaField& sigma, const DiskMesh& mesh,
                              const BoundaryMap& phi) {
    AssembledSystem sys = assemble(sigma, mesh);
    DiscreteMapping mapping;
    mapping.u1 = solve_dirichlet(sys, mesh, [&](double t) { return phi.at(t).x(); });
    mapping.u2 = solve_dirichlet(sys, mesh, [&](double t) { return phi.at(t).y(); });
    mapping.tri_jacobians.resize(mesh.triangles.size());
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const Vec2& g1 = mapping.u1.tri_gradients[t];
        const Vec2& g2 = mapping.u2.tri_gradients[t];
        mapping.tri_jacobians(t) = g1.x() * g2.y() - g1.y() * g2.x();
    }
    mapping.boundary = boundary_jacobian(mapping, mesh, phi);
    return mapping;
}

} // namespace certify
