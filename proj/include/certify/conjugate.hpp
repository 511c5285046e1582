#pragma once

#include "certify/coeff.hpp"
#include "certify/geometry.hpp"
#include "certify/solver.hpp"

#include <complex>
#include <vector>

namespace certify {

struct StreamFunction {
    Eigen::VectorXd vertex_values;
    std::vector<Vec2> tri_gradients; // J sigma grad u, constant per triangle
    int base_vertex = 0;
    double loop_residual = 0.0; // worst closed-loop mismatch over non-tree connections
};

/// Integrates grad v = J sigma grad u between edge midpoints through triangle
/// interiors, breadth-first from an edge of the base vertex (default: the
/// boundary vertex at theta = 0). Connections not used by the traversal
/// measure closedness; the discrete equations make these mismatches vanish to
/// rounding when u is a discrete solution, and NonClosedForm is thrown past
/// tol x value range otherwise.
StreamFunction stream_function(const SigmaField& sigma, const ScalarField& u, const DiskMesh& mesh,
                               int base_vertex = -1, double tol = 1e-6);

struct ComplexMap {
    std::vector<Complex> f;       // u + iv per vertex
    std::vector<Complex> f_z;     // Wirtinger derivatives per triangle
    std::vector<Complex> f_zbar;
};

ComplexMap complex_map(const ScalarField& u, const StreamFunction& v, const DiskMesh& mesh);

struct BeltramiResidual {
    Eigen::VectorXd per_triangle;  // |f_zbar - mu f_z - nu conj(f_z)|
    double max = 0.0;
    double max_interior = 0.0;     // excluding the two rings nearest the boundary
    double max_abs_fz = 0.0;
};

BeltramiResidual beltrami_residual(const ComplexMap& fmap, const SigmaField& sigma,
                                   const DiskMesh& mesh);

} // namespace certify
