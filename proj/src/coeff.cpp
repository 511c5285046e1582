#include "certify/coeff.hpp"

#include "certify/errors.hpp"

#include <array>
#include <cmath>

namespace certify {

std::string to_string(Smoothness s) {
    switch (s) {
    case Smoothness::Hoelder: return "Hoelder";
    case Smoothness::Lipschitz: return "Lipschitz";
    case Smoothness::Smooth: return "Smooth";
    }
    return "?";
}

Smoothness smoothness_from_string(const std::string& s) {
    if (s == "Hoelder" || s == "hoelder")
        return Smoothness::Hoelder;
    if (s == "Lipschitz" || s == "lipschitz")
        return Smoothness::Lipschitz;
    if (s == "Smooth" || s == "smooth")
        return Smoothness::Smooth;
    throw ScenarioError("unknown smoothness tag '" + s + "'");
}

SigmaField::SigmaField(std::function<Mat2(double, double)> fn, double K, Smoothness smoothness)
    : fn_(std::move(fn)), K_(K), smoothness_(smoothness) {
    if (K_ < 1.0)
        throw ScenarioError("ellipticity constant K must be >= 1");
}

SigmaField SigmaField::identity() {
    return constant(Mat2::Identity(), 1.0);
}

SigmaField SigmaField::constant(const Mat2& m, double K, Smoothness smoothness) {
    return SigmaField([m](double, double) { return m; }, K, smoothness);
}

SigmaField SigmaField::from_exprs(const std::array<std::string, 4>& entries, double K,
                                  Smoothness smoothness) {
    std::array<Expr, 4> ex;
    for (int i = 0; i < 4; ++i)
        ex[i] = Expr::parse(entries[i]);
    auto fn = [ex](double x, double y) {
        ExprEnv env;
        env.x = x;
        env.y = y;
        Mat2 m;
        m << ex[0].eval(env), ex[1].eval(env), ex[2].eval(env), ex[3].eval(env);
        return m;
    };
    return SigmaField(std::move(fn), K, smoothness);
}

EllipticityCertificate check_ellipticity(const SigmaField& sigma, const std::vector<Vec2>& points,
                                         int n_directions, double tol) {
    EllipticityCertificate cert;
    cert.min_quad = std::numeric_limits<double>::infinity();
    cert.min_inv_quad = std::numeric_limits<double>::infinity();
    cert.min_det = std::numeric_limits<double>::infinity();

    const double dphi = M_PI / n_directions; // quadratic forms are even in xi
    for (const Vec2& p : points) {
        Mat2 m = sigma.at(p);
        double det = m.determinant();
        if (det <= 0.0)
            throw NonInvertibleSigma("det sigma = " + std::to_string(det) + " at (" +
                                     std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
        cert.min_det = std::min(cert.min_det, det);
        Mat2 inv = m.inverse();
        for (int k = 0; k < n_directions; ++k) {
            Vec2 xi(std::cos(k * dphi), std::sin(k * dphi));
            double q = xi.dot(m * xi);
            double qi = xi.dot(inv * xi);
            if (std::min(q, qi) < std::min(cert.min_quad, cert.min_inv_quad))
                cert.worst_point = p;
            cert.min_quad = std::min(cert.min_quad, q);
            cert.min_inv_quad = std::min(cert.min_inv_quad, qi);
        }
    }
    double bound = 1.0 / sigma.K() - tol;
    cert.pass = cert.min_quad >= bound && cert.min_inv_quad >= bound;
    return cert;
}

namespace {

// Central difference clamped to the closed unit disk: points outside fall
// back to a one-sided stencil.
double partial(const std::function<double(double, double)>& f, double x, double y, int axis,
               double h) {
    auto inside = [](double px, double py) { return px * px + py * py <= 1.0 + 1e-12; };
    double dx = axis == 0 ? h : 0.0;
    double dy = axis == 1 ? h : 0.0;
    bool plus = inside(x + dx, y + dy);
    bool minus = inside(x - dx, y - dy);
    if (plus && minus)
        return (f(x + dx, y + dy) - f(x - dx, y - dy)) / (2.0 * h);
    if (plus)
        return (f(x + dx, y + dy) - f(x, y)) / h;
    return (f(x, y) - f(x - dx, y - dy)) / h;
}

} // namespace

AbForm reduce_to_ab(const SigmaField& sigma, double step) {
    if (sigma.smoothness() == Smoothness::Hoelder)
        throw InsufficientSmoothness(
            "the Ab reduction differentiates the coefficient field; Lipschitz entries required");
    if (!(step > 0.0))
        throw ScenarioError("reduce_to_ab: step must be positive");

    AbForm ab;
    ab.step = step;
    ab.sigma_hat = [sigma](double x, double y) {
        Mat2 m = sigma.at(x, y);
        return Mat2(0.5 * (m + m.transpose()));
    };
    ab.sigma_check = [sigma](double x, double y) {
        Mat2 m = sigma.at(x, y);
        return Mat2(0.5 * (m - m.transpose()));
    };
    auto hat = ab.sigma_hat;
    ab.gamma = [hat](double x, double y) { return std::sqrt(hat(x, y).determinant()); };
    auto gamma = ab.gamma;
    ab.A = [hat, gamma](double x, double y) { return Mat2(hat(x, y) / gamma(x, y)); };

    auto check = ab.sigma_check;
    ab.b = [gamma, check, step](double x, double y) {
        // b_j = gamma^{-1} d_i (gamma delta_ij + sigma_check_ij)
        Vec2 b;
        for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (int i = 0; i < 2; ++i) {
                auto entry = [&gamma, &check, i, j](double px, double py) {
                    double v = check(px, py)(i, j);
                    if (i == j)
                        v += gamma(px, py);
                    return v;
                };
                s += partial(entry, x, y, i, step);
            }
            b(j) = s / gamma(x, y);
        }
        return b;
    };
    return ab;
}

std::pair<Complex, Complex> beltrami_dilatations(const SigmaField& sigma, const Vec2& point) {
    Mat2 m = sigma.at(point);
    double det = m.determinant();
    if (det <= 0.0)
        throw NonInvertibleSigma("det sigma <= 0 at the requested point");
    double denom = 1.0 + m.trace() + det;
    Complex mu(m(1, 1) - m(0, 0), -(m(0, 1) + m(1, 0)));
    Complex nu(1.0 - det, m(0, 1) - m(1, 0));
    return {mu / denom, nu / denom};
}

BeltramiPair beltrami_pair(const SigmaField& sigma, const std::vector<Vec2>& sample_points) {
    BeltramiPair pair;
    pair.at = [sigma](double x, double y) { return beltrami_dilatations(sigma, Vec2(x, y)); };
    for (const Vec2& p : sample_points) {
        auto [mu, nu] = beltrami_dilatations(sigma, p);
        pair.k_bound = std::max(pair.k_bound, std::abs(mu) + std::abs(nu));
    }
    return pair;
}

Complex second_dilatation(Complex mu, Complex nu, Complex f_z, double tol) {
    if (std::abs(f_z) < tol)
        throw VanishingDerivative("second_dilatation: |f_z| below tolerance");
    return mu + std::conj(f_z) / f_z * nu;
}

Mat2 sigma_tilde(Complex mu_tilde) {
    double m2 = std::norm(mu_tilde);
    if (m2 >= 1.0)
        throw DegenerateDilatation("sigma_tilde: |mu_tilde| >= 1");
    double d = 1.0 - m2;
    Mat2 s;
    s(0, 0) = std::norm(Complex(1.0, 0.0) - mu_tilde) / d;
    s(1, 1) = std::norm(Complex(1.0, 0.0) + mu_tilde) / d;
    s(0, 1) = s(1, 0) = -2.0 * mu_tilde.imag() / d;
    return s;
}

} // namespace certify
