#include "certify/topology.hpp"

#include "certify/errors.hpp"

#include <cmath>
#include <numbers>

namespace certify {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

WindingNumberResult winding_number(const std::vector<Vec2>& loop) {
    int n = static_cast<int>(loop.size());
    if (n < 3)
        throw UnderSampled("winding_number: need at least 3 samples");
    double max_norm = 0.0;
    for (const Vec2& v : loop)
        max_norm = std::max(max_norm, v.norm());
    WindingNumberResult res;
    res.min_speed = std::numeric_limits<double>::infinity();
    for (const Vec2& v : loop) {
        double norm = v.norm();
        res.min_speed = std::min(res.min_speed, norm);
        if (norm < 1e-12 * max_norm)
            throw VanishingDerivative("winding_number: sample norm " + std::to_string(norm) +
                                      " below tolerance");
    }
    for (int k = 0; k < n; ++k) {
        const Vec2& a = loop[k];
        const Vec2& b = loop[(k + 1) % n];
        double d = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
        if (std::abs(d) >= std::numbers::pi / 2.0)
            throw UnderSampled("winding_number: turn of " + std::to_string(d) +
                               " rad between samples " + std::to_string(k) + " and " +
                               std::to_string(k + 1));
        res.total_turn += d;
    }
    res.value = static_cast<int>(std::lround(res.total_turn / kTwoPi));
    res.rounding_residual = std::abs(res.total_turn / kTwoPi - res.value);
    return res;
}

WindingNumberResult winding_number(const std::vector<Complex>& loop) {
    std::vector<Vec2> v(loop.size());
    for (size_t k = 0; k < loop.size(); ++k)
        v[k] = Vec2(loop[k].real(), loop[k].imag());
    return winding_number(v);
}

namespace {

std::vector<Complex> dz_boundary_trace(const DiscreteMapping& mapping, const DiskMesh& mesh,
                                       double alpha) {
    double c = std::cos(alpha), s = std::sin(alpha);
    std::vector<Complex> trace;
    trace.reserve(mesh.boundary_edge_triangle.size());
    for (int t : mesh.boundary_edge_triangle) {
        Vec2 g = c * mapping.u1.tri_gradients[t] + s * mapping.u2.tri_gradients[t];
        trace.emplace_back(0.5 * g.x(), -0.5 * g.y());
    }
    return trace;
}

} // namespace

int critical_count(const DiscreteMapping& mapping, const DiskMesh& mesh, double alpha) {
    std::vector<Complex> trace = dz_boundary_trace(mapping, mesh, alpha);
    double max_abs = 0.0;
    for (const Complex& z : trace)
        max_abs = std::max(max_abs, std::abs(z));
    for (size_t k = 0; k < trace.size(); ++k) {
        if (std::abs(trace[k]) < 1e-8 * max_abs)
            throw BoundaryCritical("d_z u_alpha degenerates on the boundary near edge " +
                                   std::to_string(k) + " (alpha = " + std::to_string(alpha) + ")");
    }
    return winding_number(trace).value;
}

AlphaSweep alpha_sweep(const DiscreteMapping& mapping, const DiskMesh& mesh, int n_alpha) {
    AlphaSweep sweep;
    sweep.alphas.resize(n_alpha);
    sweep.counts.assign(n_alpha, 0);
    sweep.defined.assign(n_alpha, 0);
    for (int i = 0; i < n_alpha; ++i) {
        sweep.alphas[i] = std::numbers::pi * i / n_alpha;
        try {
            sweep.counts[i] = critical_count(mapping, mesh, sweep.alphas[i]);
            sweep.defined[i] = 1;
        } catch (const Error&) {
            sweep.counts[i] = -1;
        }
    }
    sweep.constant = true;
    int common = -1;
    for (int i = 0; i < n_alpha; ++i) {
        if (!sweep.defined[i]) {
            sweep.constant = false;
            continue;
        }
        if (common < 0)
            common = sweep.counts[i];
        else if (sweep.counts[i] != common)
            sweep.constant = false;
    }
    sweep.M = sweep.constant ? common : -1;
    return sweep;
}

int xi_field_count(const DiscreteMapping& mapping, const DiskMesh& mesh) {
    std::vector<Vec2> trace;
    trace.reserve(mesh.boundary_edge_triangle.size());
    double max_norm = 0.0;
    for (int t : mesh.boundary_edge_triangle)
        max_norm = std::max(max_norm, mapping.u1.tri_gradients[t].norm());
    for (int t : mesh.boundary_edge_triangle) {
        Vec2 g = mapping.u1.tri_gradients[t];
        if (g.norm() < 1e-8 * max_norm)
            throw VanishingGradient("xi_field_count: grad u1 degenerates on the boundary");
        trace.emplace_back(-g.y() / g.norm(), g.x() / g.norm());
    }
    return winding_number(trace).value;
}

HomotopyRecord homotopy_check(const DiscreteMapping& mapping, const SigmaField& sigma,
                              const DiskMesh& mesh, int n_t) {
    int nb = static_cast<int>(mesh.boundary_loop.size());
    HomotopyRecord rec;
    rec.det_t0.resize(nb);
    for (int j = 0; j < nb; ++j) {
        Vec2 g = mapping.boundary.grad_u1[j];
        rec.det_t0(j) = g.dot(sigma.at(mesh.vertices[mesh.boundary_loop[j]]) * g);
    }
    rec.min_boundary_det = std::numeric_limits<double>::infinity();
    rec.t_grid.resize(n_t);
    for (int i = 0; i < n_t; ++i) {
        double t = static_cast<double>(i) / (n_t - 1);
        rec.t_grid[i] = t;
        for (int j = 0; j < nb; ++j) {
            double d = (1.0 - t) * rec.det_t0(j) + t * mapping.boundary.det(j);
            rec.min_boundary_det = std::min(rec.min_boundary_det, d);
        }
    }
    return rec;
}

MPlusOneReport verify_m_plus_one(const ComplexMap& fmap, const AlphaSweep& sweep,
                                 const DiskMesh& mesh, const BoundaryMap& phi) {
    MPlusOneReport rep;
    rep.M = sweep.M;

    // tangent of theta -> f(e^{i theta}) from the Wirtinger derivatives on the
    // boundary-adjacent triangles, at the boundary edge midpoints
    int nb = static_cast<int>(mesh.boundary_loop.size());
    std::vector<Complex> df(nb);
    for (int j = 0; j < nb; ++j) {
        int t = mesh.boundary_edge_triangle[j];
        double tm = 0.5 * (mesh.boundary_theta[j] +
                           (j + 1 < nb ? mesh.boundary_theta[j + 1] : kTwoPi));
        Complex zp(-std::sin(tm), std::cos(tm)); // i e^{i theta}
        df[j] = fmap.f_z[t] * zp + fmap.f_zbar[t] * std::conj(zp);
    }
    rep.wn_f = winding_number(df).value;

    int ns = static_cast<int>(phi.sample_thetas().size());
    std::vector<Vec2> dphi(ns);
    for (int k = 0; k < ns; ++k)
        dphi[k] = phi.derivative(phi.sample_thetas()[k]);
    rep.wn_phi = winding_number(dphi).value;

    rep.m_plus_one_holds = sweep.constant && rep.wn_f == rep.M + 1;
    rep.wn_phi_is_one = rep.wn_phi == 1;
    return rep;
}

} // namespace certify
