#pragma once

#include "certify/conjugate.hpp"
#include "certify/geometry.hpp"
#include "certify/solver.hpp"

#include <vector>

namespace certify {

struct WindingNumberResult {
    int value = 0;
    double total_turn = 0.0;       // accumulated argument change, radians
    double min_speed = 0.0;        // minimum sample norm
    double rounding_residual = 0.0;
};

/// Branch-consistent total turning of a closed loop of nonzero 2-vectors.
/// Throws VanishingDerivative on a near-zero sample and UnderSampled when a
/// step turns by pi/2 or more.
WindingNumberResult winding_number(const std::vector<Vec2>& loop);
WindingNumberResult winding_number(const std::vector<Complex>& loop);

/// The argument-principle count M_alpha: winding of the boundary trace of
/// d_z u_alpha, evaluated on the triangles adjacent to the boundary edges.
/// Throws BoundaryCritical when the trace degenerates.
int critical_count(const DiscreteMapping& mapping, const DiskMesh& mesh, double alpha);

struct AlphaSweep {
    std::vector<double> alphas;
    std::vector<int> counts;
    std::vector<char> defined;  // false where BoundaryCritical was flagged
    bool constant = false;
    int M = -1;                 // common value when constant
};

AlphaSweep alpha_sweep(const DiscreteMapping& mapping, const DiskMesh& mesh, int n_alpha = 16);

/// Winding of the rotated, normalized gradient field of u1 along the
/// boundary; equals M_alpha whenever det DU > 0 on the boundary. Independent
/// cross-check of critical_count.
int xi_field_count(const DiscreteMapping& mapping, const DiskMesh& mesh);

struct HomotopyRecord {
    std::vector<double> t_grid;
    double min_boundary_det = 0.0;
    Eigen::VectorXd det_t0;  // sigma grad u1 . grad u1 at boundary vertices
};

/// Evaluates det DU_t = (1-t) sigma grad u1 . grad u1 + t det DU on the
/// boundary over a uniform t-grid. A positive minimum certifies the homotopy
/// from f to U is nondegenerate, so the two boundary images share their
/// winding number.
HomotopyRecord homotopy_check(const DiscreteMapping& mapping, const SigmaField& sigma,
                              const DiskMesh& mesh, int n_t = 33);

struct MPlusOneReport {
    int wn_f = 0;
    int wn_phi = 0;
    int M = -1;
    bool m_plus_one_holds = false;
    bool wn_phi_is_one = false;
};

/// Checks WN(f(dB)) = M + 1 and WN(Phi(dB)) = 1 as exact integer identities.
MPlusOneReport verify_m_plus_one(const ComplexMap& fmap, const AlphaSweep& sweep,
                                 const DiskMesh& mesh, const BoundaryMap& phi);

} // namespace certify
