#pragma once

#include "certify/coeff.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace certify {

/// Structured polar-ring triangulation of the closed unit disk.
struct DiskMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles; // positively oriented
    std::vector<int> boundary_loop;            // counterclockwise boundary vertex indices
    std::vector<double> boundary_theta;        // parameter angle per boundary_loop entry
    std::vector<int> boundary_edge_triangle;   // triangle adjacent to boundary edge j -> j+1
    std::vector<int> triangle_ring;            // outer ring index per triangle (1 = innermost)
    std::vector<char> is_boundary;             // per vertex
    int n_rings = 0;
    double h = 0.0; // maximum edge length

    double area(int t) const;
    Vec2 barycenter(int t) const;
    /// Gradient of the P1 interpolant of the three vertex values on triangle t.
    Vec2 p1_gradient(int t, double w0, double w1, double w2) const;

    // adjacency, built once at construction
    std::vector<std::vector<int>> vertex_triangles;
    struct Edge {
        int a, b;        // a < b
        int t0, t1;      // incident triangles, t1 = -1 on the boundary
    };
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> triangle_edges;
};

DiskMesh build_disk_mesh(int n_boundary, double grading = 1.0);

/// Parametrized boundary data Phi(theta) with derivative, plus a dense
/// polyline of samples used for validation and hull computation.
class BoundaryMap {
  public:
    BoundaryMap() = default;

    static BoundaryMap from_exprs(const std::string& ex, const std::string& ey,
                                  int n_samples = 4096);
    /// Periodic cubic interpolation of (theta, x, y) rows.
    static BoundaryMap from_points(const std::vector<std::array<double, 3>>& rows,
                                   int n_samples = 4096);

    Vec2 at(double theta) const { return phi_(theta); }
    Vec2 derivative(double theta) const { return phi_prime_(theta); }
    const std::vector<Vec2>& samples() const { return samples_; }
    const std::vector<double>& sample_thetas() const { return thetas_; }

  private:
    std::function<Vec2(double)> phi_;
    std::function<Vec2(double)> phi_prime_;
    std::vector<Vec2> samples_;
    std::vector<double> thetas_;

    void resample(int n_samples);
};

struct BoundaryValidation {
    bool simple = false;
    bool orientation_preserving = false;
    bool tangent_nonvanishing = false;
    double signed_area = 0.0;
    double min_tangent_norm = 0.0;
    double offending_theta = -1.0; // of the first failure, when any
};

/// Checks simplicity, orientation and (numerically) nonvanishing dPhi/dtheta.
BoundaryValidation validate_boundary_map(const BoundaryMap& phi, int n_samples = 1024);
/// Same, throwing SelfIntersecting / OrientationReversed / DegenerateTangent.
void validate_boundary_map_or_throw(const BoundaryMap& phi, int n_samples = 1024);

using ThetaInterval = std::pair<double, double>; // may wrap past 2*pi

struct ConvexDecomposition {
    std::vector<ThetaInterval> gamma_c;  // parameter arcs on the hull boundary
    std::vector<ThetaInterval> gamma_nc; // arcs strictly inside the hull
    std::vector<Vec2> hull;              // convex hull polyline, counterclockwise
    double tol = 0.0;
};

/// Splits the target curve into its convex and non-convex parts by comparing
/// each sample against the convex hull of the dense polyline. tol < 0 selects
/// the default 1e-9 x curve diameter.
ConvexDecomposition convex_decompose(const BoundaryMap& phi, int n_samples = 4096,
                                     double tol = -1.0);

/// Phi^{-1}(gamma_nc): since the curve is parametrized by theta these are the
/// non-convex parameter arcs themselves.
std::vector<ThetaInterval> preimage_arcs(const ConvexDecomposition& decomp);

bool theta_in_interval(double theta, const ThetaInterval& iv);

} // namespace certify
