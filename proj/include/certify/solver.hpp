#pragma once

#include "certify/coeff.hpp"
#include "certify/geometry.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <vector>

namespace certify {

/// P1 finite element field on a DiskMesh.
struct ScalarField {
    Eigen::VectorXd vertex_values;
    std::vector<Vec2> tri_gradients;     // constant per triangle
    Eigen::VectorXd dirichlet_trace;     // boundary values, ordered like boundary_loop
};

struct AssembledSystem {
    Eigen::SparseMatrix<double> interior;  // stiffness on interior dofs (test x trial)
    Eigen::SparseMatrix<double> coupling;  // interior x boundary, for the Dirichlet lift
    std::vector<int> interior_of_vertex;   // -1 for boundary vertices
    std::vector<int> boundary_of_vertex;   // -1 for interior vertices
    std::vector<int> vertex_of_interior;
};

/// Weak-form stiffness with one-point quadrature at barycenters; the matrix is
/// non-symmetric exactly when sigma has a skew part.
AssembledSystem assemble(const SigmaField& sigma, const DiskMesh& mesh);

/// Solves div(sigma grad u) = 0 with u = g(theta) on the boundary.
/// Direct sparse LU for small problems, BiCGSTAB with ILU at
/// n_boundary >= 1024. Residual is checked against 1e-10 x load norm.
ScalarField solve_dirichlet(const SigmaField& sigma, const DiskMesh& mesh,
                            const std::function<double(double)>& g);
ScalarField solve_dirichlet(const AssembledSystem& sys, const DiskMesh& mesh,
                            const std::function<double(double)>& g);

struct BoundaryJacobianProfile {
    Eigen::VectorXd det;                 // det DU per boundary vertex
    std::vector<char> low_confidence;    // incident gradients disagree by > 50%
    std::vector<Vec2> grad_u1;           // recovered full gradient at boundary vertices
    std::vector<Vec2> grad_u2;
};

struct DiscreteMapping {
    ScalarField u1, u2;
    Eigen::VectorXd tri_jacobians;       // det DU per triangle
    BoundaryJacobianProfile boundary;
};

/// Solves both components on one mesh and fills the Jacobian data.
DiscreteMapping solve_mapping(const SigmaField& sigma, const DiskMesh& mesh,
                              const BoundaryMap& phi);

/// det DU at boundary vertices: tangential derivative from the analytic
/// Phi'(theta), normal derivative area-averaged from the incident triangles.
BoundaryJacobianProfile boundary_jacobian(const DiscreteMapping& mapping, const DiskMesh& mesh,
                                          const BoundaryMap& phi);

} // namespace certify
