#include "certify/geometry.hpp"

#include "certify/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace certify {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}
} // namespace

double DiskMesh::area(int t) const {
    const auto& tri = triangles[t];
    return 0.5 * cross2(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

Vec2 DiskMesh::barycenter(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

Vec2 DiskMesh::p1_gradient(int t, double w0, double w1, double w2) const {
    const auto& tri = triangles[t];
    const Vec2& a = vertices[tri[0]];
    const Vec2& b = vertices[tri[1]];
    const Vec2& c = vertices[tri[2]];
    double inv2A = 1.0 / (2.0 * area(t));
    auto rot = [](const Vec2& v) { return Vec2(-v.y(), v.x()); };
    return inv2A * (w0 * rot(c - b) + w1 * rot(a - c) + w2 * rot(b - a));
}

DiskMesh build_disk_mesh(int n_boundary, double grading) {
    if (n_boundary < 8)
        throw ScenarioError("build_disk_mesh: n_boundary must be >= 8");
    if (!(grading > 0.0))
        throw ScenarioError("build_disk_mesh: grading must be positive");

    DiskMesh mesh;
    int R = std::max(1, static_cast<int>(std::lround(n_boundary / 8.0)));
    mesh.n_rings = R;

    // ring k has m_k vertices at radius (k/R)^grading, ring R is the boundary
    std::vector<int> count(R + 1), offset(R + 1);
    count[0] = 1;
    offset[0] = 0;
    mesh.vertices.push_back(Vec2::Zero());
    for (int k = 1; k <= R; ++k) {
        count[k] = (k == R) ? n_boundary
                            : std::max(8, static_cast<int>(std::lround(
                                              static_cast<double>(n_boundary) * k / R)));
        offset[k] = static_cast<int>(mesh.vertices.size());
        double r = std::pow(static_cast<double>(k) / R, grading);
        for (int j = 0; j < count[k]; ++j) {
            double a = kTwoPi * j / count[k];
            mesh.vertices.emplace_back(r * std::cos(a), r * std::sin(a));
        }
    }
    // boundary vertices exactly on the unit circle
    for (int j = 0; j < n_boundary; ++j) {
        double a = kTwoPi * j / n_boundary;
        mesh.vertices[offset[R] + j] = Vec2(std::cos(a), std::sin(a));
    }

    // center fan
    for (int j = 0; j < count[1]; ++j) {
        int a = offset[1] + j;
        int b = offset[1] + (j + 1) % count[1];
        mesh.triangles.push_back({0, a, b});
        mesh.triangle_ring.push_back(1);
        if (R == 1)
            mesh.boundary_edge_triangle.push_back(static_cast<int>(mesh.triangles.size()) - 1);
    }

    // annulus between consecutive rings: merge by angle
    for (int k = 1; k < R; ++k) {
        int mi = count[k], mo = count[k + 1];
        int oi = offset[k], oo = offset[k + 1];
        int i = 0, j = 0;
        while (i < mi || j < mo) {
            double next_inner = i < mi ? kTwoPi * (i + 1) / mi : std::numeric_limits<double>::infinity();
            double next_outer = j < mo ? kTwoPi * (j + 1) / mo : std::numeric_limits<double>::infinity();
            if (next_outer <= next_inner) {
                mesh.triangles.push_back({oi + i % mi, oo + j, oo + (j + 1) % mo});
                if (k + 1 == R)
                    mesh.boundary_edge_triangle.push_back(static_cast<int>(mesh.triangles.size()) - 1);
                ++j;
            } else {
                mesh.triangles.push_back({oi + i, oo + j % mo, oi + (i + 1) % mi});
                ++i;
            }
            mesh.triangle_ring.push_back(k + 1);
        }
    }

    mesh.boundary_loop.resize(n_boundary);
    mesh.boundary_theta.resize(n_boundary);
    mesh.is_boundary.assign(mesh.vertices.size(), 0);
    for (int j = 0; j < n_boundary; ++j) {
        mesh.boundary_loop[j] = offset[R] + j;
        mesh.boundary_theta[j] = kTwoPi * j / n_boundary;
        mesh.is_boundary[offset[R] + j] = 1;
    }

    // audits and derived quantities
    mesh.vertex_triangles.assign(mesh.vertices.size(), {});
    mesh.triangle_edges.resize(mesh.triangles.size());
    std::map<std::pair<int, int>, int> edge_index;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        if (mesh.area(t) < 1e-14)
            throw MeshDegenerate("triangle " + std::to_string(t) + " has area " +
                                 std::to_string(mesh.area(t)));
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            mesh.vertex_triangles[tri[e]].push_back(t);
            int a = tri[e], b = tri[(e + 1) % 3];
            mesh.h = std::max(mesh.h, (mesh.vertices[a] - mesh.vertices[b]).norm());
            auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                int id = static_cast<int>(mesh.edges.size());
                edge_index[key] = id;
                mesh.edges.push_back({key.first, key.second, t, -1});
                mesh.triangle_edges[t][e] = id;
            } else {
                mesh.edges[it->second].t1 = t;
                mesh.triangle_edges[t][e] = it->second;
            }
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------

void BoundaryMap::resample(int n_samples) {
    thetas_.resize(n_samples);
    samples_.resize(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        thetas_[k] = kTwoPi * k / n_samples;
        samples_[k] = phi_(thetas_[k]);
    }
}

BoundaryMap BoundaryMap::from_exprs(const std::string& ex, const std::string& ey, int n_samples) {
    Expr px = Expr::parse(ex);
    Expr py = Expr::parse(ey);
    auto phi = [px, py](double theta) {
        ExprEnv env;
        env.theta = theta;
        return Vec2(px.eval(env), py.eval(env));
    };
    const double dh = 1e-6;
    auto prime = [phi, dh](double theta) {
        return Vec2((phi(theta + dh) - phi(theta - dh)) / (2.0 * dh));
    };
    BoundaryMap map;
    map.phi_ = phi;
    map.phi_prime_ = prime;
    map.resample(n_samples);
    return map;
}

namespace {

// Periodic cubic spline through (t_i, v_i), t in [0, 2*pi).
class PeriodicSpline {
  public:
    PeriodicSpline(std::vector<double> t, std::vector<double> v)
        : t_(std::move(t)), v_(std::move(v)) {
        int n = static_cast<int>(t_.size());
        std::vector<double> h(n);
        for (int i = 0; i < n; ++i)
            h[i] = knot(i + 1) - t_[i];
        // cyclic tridiagonal system for second derivatives
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            int im = (i + n - 1) % n;
            A(i, im) += h[im];
            A(i, i) += 2.0 * (h[im] + h[i]);
            A(i, (i + 1) % n) += h[i];
            double d1 = (value(i + 1) - v_[i]) / h[i];
            double d0 = (v_[i] - value(i - 1)) / h[im];
            rhs(i) = 6.0 * (d1 - d0);
        }
        Eigen::VectorXd m = A.fullPivLu().solve(rhs);
        m2_.assign(m.data(), m.data() + n);
        h_ = std::move(h);
    }

    double eval(double t, int deriv) const {
        int n = static_cast<int>(t_.size());
        t = std::fmod(t, kTwoPi);
        if (t < 0)
            t += kTwoPi;
        int i = static_cast<int>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
        if (i < 0)
            i = n - 1;
        double a = t - t_[i];
        double h = h_[i];
        double b = h - a;
        double mi = m2_[i], mj = m2_[(i + 1) % n];
        double vi = v_[i], vj = value(i + 1);
        if (deriv == 0)
            return (mi * b * b * b + mj * a * a * a) / (6.0 * h) +
                   (vi / h - mi * h / 6.0) * b + (vj / h - mj * h / 6.0) * a;
        return (-mi * b * b + mj * a * a) / (2.0 * h) - (vi / h - mi * h / 6.0) +
               (vj / h - mj * h / 6.0);
    }

  private:
    std::vector<double> t_, v_, m2_, h_;

    double knot(int i) const {
        int n = static_cast<int>(t_.size());
        if (i >= n)
            return t_[i - n] + kTwoPi;
        if (i < 0)
            return t_[i + n] - kTwoPi;
        return t_[i];
    }
    double value(int i) const {
        int n = static_cast<int>(t_.size());
        return v_[(i % n + n) % n];
    }
};

} // namespace

BoundaryMap BoundaryMap::from_points(const std::vector<std::array<double, 3>>& rows,
                                     int n_samples) {
    if (rows.size() < 4)
        throw ScenarioError("boundary point list needs at least 4 rows");
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    std::vector<double> t, x, y;
    for (const auto& r : sorted) {
        if (!t.empty() && r[0] <= t.back())
            throw ScenarioError("boundary point list has duplicate theta values");
        t.push_back(r[0]);
        x.push_back(r[1]);
        y.push_back(r[2]);
    }
    if (t.front() < 0.0 || t.back() >= kTwoPi)
        throw ScenarioError("boundary point thetas must lie in [0, 2*pi)");
    auto sx = std::make_shared<PeriodicSpline>(t, x);
    auto sy = std::make_shared<PeriodicSpline>(t, y);
    BoundaryMap map;
    map.phi_ = [sx, sy](double theta) { return Vec2(sx->eval(theta, 0), sy->eval(theta, 0)); };
    map.phi_prime_ = [sx, sy](double theta) {
        return Vec2(sx->eval(theta, 1), sy->eval(theta, 1));
    };
    map.resample(n_samples);
    return map;
}

// ---------------------------------------------------------------------------

namespace {

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        double v = cross2(q - p, r - p);
        return (v > 0) - (v < 0);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4;
}

} // namespace

BoundaryValidation validate_boundary_map(const BoundaryMap& phi, int n_samples) {
    if (n_samples < 64)
        throw ScenarioError("validate_boundary_map: n_samples must be >= 64");
    BoundaryValidation rep;
    std::vector<Vec2> pts(n_samples);
    std::vector<double> th(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        th[k] = kTwoPi * k / n_samples;
        pts[k] = phi.at(th[k]);
    }

    rep.signed_area = 0.0;
    for (int k = 0; k < n_samples; ++k)
        rep.signed_area += 0.5 * cross2(pts[k], pts[(k + 1) % n_samples]);
    rep.orientation_preserving = rep.signed_area > 0.0;

    rep.simple = true;
    for (int i = 0; i < n_samples && rep.simple; ++i) {
        for (int j = i + 2; j < n_samples; ++j) {
            if (i == 0 && j == n_samples - 1)
                continue; // adjacent around the wrap
            if (segments_intersect(pts[i], pts[(i + 1) % n_samples], pts[j],
                                   pts[(j + 1) % n_samples])) {
                rep.simple = false;
                rep.offending_theta = th[i];
                break;
            }
        }
    }

    double max_t = 0.0, min_t = std::numeric_limits<double>::infinity();
    double min_theta = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        double norm = phi.derivative(th[k]).norm();
        max_t = std::max(max_t, norm);
        if (norm < min_t) {
            min_t = norm;
            min_theta = th[k];
        }
    }
    rep.min_tangent_norm = min_t;
    rep.tangent_nonvanishing = min_t > 1e-8 * max_t;
    if (!rep.tangent_nonvanishing && rep.offending_theta < 0.0)
        rep.offending_theta = min_theta;
    if (!rep.orientation_preserving && rep.offending_theta < 0.0)
        rep.offending_theta = 0.0;
    return rep;
}

void validate_boundary_map_or_throw(const BoundaryMap& phi, int n_samples) {
    BoundaryValidation rep = validate_boundary_map(phi, n_samples);
    if (!rep.simple)
        throw SelfIntersecting("boundary curve self-intersects near theta = " +
                               std::to_string(rep.offending_theta));
    if (!rep.orientation_preserving)
        throw OrientationReversed("boundary curve has negative signed area " +
                                  std::to_string(rep.signed_area));
    if (!rep.tangent_nonvanishing)
        throw DegenerateTangent("dPhi/dtheta vanishes near theta = " +
                                std::to_string(rep.offending_theta));
}

// ---------------------------------------------------------------------------

namespace {

// Monotone chain; returns counterclockwise hull without the repeated first
// point. Collinear points are dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a == b; }),
              pts.end());
    int n = static_cast<int>(pts.size());
    if (n < 3)
        return pts;
    std::vector<Vec2> hull(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double dist_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double t = ab.squaredNorm() > 0 ? (p - a).dot(ab) / ab.squaredNorm() : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

} // namespace

ConvexDecomposition convex_decompose(const BoundaryMap& phi, int n_samples, double tol) {
    std::vector<Vec2> pts(n_samples);
    std::vector<double> th(n_samples);
    double lox = 1e300, hix = -1e300, loy = 1e300, hiy = -1e300;
    for (int k = 0; k < n_samples; ++k) {
        th[k] = kTwoPi * k / n_samples;
        pts[k] = phi.at(th[k]);
        lox = std::min(lox, pts[k].x());
        hix = std::max(hix, pts[k].x());
        loy = std::min(loy, pts[k].y());
        hiy = std::max(hiy, pts[k].y());
    }
    double diameter = std::hypot(hix - lox, hiy - loy);
    ConvexDecomposition decomp;
    decomp.hull = convex_hull(pts);
    decomp.tol = tol < 0.0 ? 1e-9 * diameter : tol;

    int nh = static_cast<int>(decomp.hull.size());
    std::vector<char> on_hull(n_samples, 0);
    for (int k = 0; k < n_samples; ++k) {
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < nh; ++i)
            d = std::min(d, dist_to_segment(pts[k], decomp.hull[i], decomp.hull[(i + 1) % nh]));
        on_hull[k] = d <= decomp.tol;
    }

    bool all_same = std::all_of(on_hull.begin(), on_hull.end(),
                                [&](char c) { return c == on_hull[0]; });
    if (all_same) {
        if (on_hull[0])
            decomp.gamma_c.push_back({0.0, kTwoPi});
        else
            decomp.gamma_nc.push_back({0.0, kTwoPi}); // cannot happen for a Jordan curve
        return decomp;
    }

    // split into maximal runs; interval endpoints at label-change midpoints
    double spacing = kTwoPi / n_samples;
    int start = 0;
    while (on_hull[start] == on_hull[(start + n_samples - 1) % n_samples])
        ++start; // first index where a new run begins
    int k = start;
    do {
        char label = on_hull[k];
        int end = k;
        while (on_hull[(end + 1) % n_samples] == label)
            end = (end + 1) % n_samples;
        double lo = th[k] - 0.5 * spacing;
        double run_len = (end >= k ? end - k : end + n_samples - k) + 1;
        double hi = lo + run_len * spacing;
        if (label)
            decomp.gamma_c.push_back({lo, hi});
        else
            decomp.gamma_nc.push_back({lo, hi});
        k = (end + 1) % n_samples;
    } while (k != start);
    return decomp;
}

std::vector<ThetaInterval> preimage_arcs(const ConvexDecomposition& decomp) {
    return decomp.gamma_nc;
}

bool theta_in_interval(double theta, const ThetaInterval& iv) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0)
        t += kTwoPi;
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
        double s = t + shift;
        if (s >= iv.first && s <= iv.second)
            return true;
    }
    return false;
}

} // namespace certify
