#include "certify/coeff.hpp"
#include "certify/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace certify;

namespace {

std::vector<Vec2> disk_grid(int n) {
    std::vector<Vec2> pts;
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            Vec2 p(i / double(n), j / double(n));
            if (p.norm() <= 1.0)
                pts.push_back(p);
        }
    return pts;
}

Mat2 diag(double a, double b) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("ellipticity of the identity field") {
    auto cert = check_ellipticity(SigmaField::identity(), disk_grid(8));
    CHECK(cert.pass);
    CHECK(cert.min_quad == doctest::Approx(1.0));
    CHECK(cert.min_inv_quad == doctest::Approx(1.0));
    CHECK(cert.min_det == doctest::Approx(1.0));
}

TEST_CASE("ellipticity at the eigenvalue extremes") {
    // diag(2, 1/2) with K = 2 sits exactly on the bound
    auto on_bound = check_ellipticity(SigmaField::constant(diag(2.0, 0.5), 2.0), disk_grid(4));
    CHECK(on_bound.pass);
    CHECK(on_bound.min_quad == doctest::Approx(0.5));

    // diag(4, 1) with K = 2: min of the inverse form is 1/4 < 1/2
    auto fails = check_ellipticity(SigmaField::constant(diag(4.0, 1.0), 2.0), disk_grid(4));
    CHECK_FALSE(fails.pass);
    CHECK(fails.min_inv_quad == doctest::Approx(0.25));
}

TEST_CASE("non invertible field is rejected") {
    CHECK_THROWS_AS(check_ellipticity(SigmaField::constant(diag(1.0, -1.0), 1.0), disk_grid(4)),
                    NonInvertibleSigma);
    CHECK_THROWS_AS(check_ellipticity(SigmaField::constant(diag(1.0, 0.0), 1.0), disk_grid(4)),
                    NonInvertibleSigma);
}

TEST_CASE("Ab reduction of a constant field") {
    Mat2 m;
    m << 2, 1, 0, 1;
    AbForm ab = reduce_to_ab(SigmaField::constant(m, 4.0), 1e-3);
    Mat2 hat = ab.sigma_hat(0.3, -0.2);
    Mat2 chk = ab.sigma_check(0.3, -0.2);
    CHECK(hat(0, 0) == doctest::Approx(2.0));
    CHECK(hat(0, 1) == doctest::Approx(0.5));
    CHECK(hat(1, 0) == doctest::Approx(0.5));
    CHECK(hat(1, 1) == doctest::Approx(1.0));
    CHECK(chk(0, 1) == doctest::Approx(0.5));
    CHECK(chk(1, 0) == doctest::Approx(-0.5));
    CHECK(chk(0, 0) == doctest::Approx(0.0));
    // constant entries: drift vanishes
    Vec2 b = ab.b(0.1, 0.4);
    CHECK(b.norm() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("Ab reduction scales out the determinant") {
    AbForm ab = reduce_to_ab(SigmaField::constant(diag(4.0, 1.0), 4.0), 1e-3);
    CHECK(ab.gamma(0, 0) == doctest::Approx(2.0));
    Mat2 A = ab.A(0, 0);
    CHECK(A(0, 0) == doctest::Approx(2.0));
    CHECK(A(1, 1) == doctest::Approx(0.5));
    CHECK(A.determinant() == doctest::Approx(1.0));
}

TEST_CASE("drift of a linear skew part") {
    // sigma = I + skew with check part (0,1) entry = x: gamma = 1,
    // b_j = d_i sigma_check_ij gives b = (d_x 0 + d_y (-x), d_x x + d_y 0) = (0, 1)
    SigmaField sigma = SigmaField::from_exprs({"1", "x", "-x", "1"}, 2.0, Smoothness::Smooth);
    AbForm ab = reduce_to_ab(sigma, 1e-4);
    for (Vec2 p : {Vec2(0.0, 0.0), Vec2(0.4, -0.3), Vec2(-0.2, 0.6)}) {
        Vec2 b = ab.b(p.x(), p.y());
        CHECK(b.x() == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(b.y() == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Ab reduction requires Lipschitz entries") {
    SigmaField rough = SigmaField::from_exprs({"1 + abs(x)/2", "0", "0", "1"}, 2.0,
                                              Smoothness::Hoelder);
    CHECK_THROWS_AS(reduce_to_ab(rough, 1e-3), InsufficientSmoothness);
}

TEST_CASE("det A = 1 pointwise for a variable field") {
    SigmaField sigma =
        SigmaField::from_exprs({"1 + x^2/2", "x*y/4", "x*y/4", "1 + y^2/2"}, 3.0,
                               Smoothness::Smooth);
    AbForm ab = reduce_to_ab(sigma, 1e-3);
    for (const Vec2& p : disk_grid(10))
        CHECK(std::abs(ab.A(p.x(), p.y()).determinant() - 1.0) < 1e-12);
}

TEST_CASE("Beltrami dilatations: hand values") {
    auto [mu0, nu0] = beltrami_dilatations(SigmaField::identity(), Vec2(0.2, 0.1));
    CHECK(std::abs(mu0) == doctest::Approx(0.0));
    CHECK(std::abs(nu0) == doctest::Approx(0.0));

    // 2I: denominator 1 + 4 + 4 = 9, nu = (1 - 4)/9 = -1/3
    auto [mu1, nu1] = beltrami_dilatations(SigmaField::constant(2.0 * Mat2::Identity(), 2.0),
                                           Vec2(0, 0));
    CHECK(std::abs(mu1) == doctest::Approx(0.0));
    CHECK(nu1.real() == doctest::Approx(-1.0 / 3.0));
    CHECK(nu1.imag() == doctest::Approx(0.0));

    // diag(1,4): denominator 1 + 5 + 4 = 10
    auto [mu2, nu2] = beltrami_dilatations(SigmaField::constant(diag(1.0, 4.0), 4.0), Vec2(0, 0));
    CHECK(mu2.real() == doctest::Approx(0.3));
    CHECK(mu2.imag() == doctest::Approx(0.0));
    CHECK(nu2.real() == doctest::Approx(-0.3));
    CHECK(std::abs(mu2) + std::abs(nu2) == doctest::Approx(0.6));
}

TEST_CASE("dilatation symmetry structure") {
    // symmetric sigma: sigma12 = sigma21, so Im nu = 0
    Mat2 sym;
    sym << 2, 0.4, 0.4, 1;
    auto [mu_s, nu_s] = beltrami_dilatations(SigmaField::constant(sym, 4.0), Vec2(0, 0));
    CHECK(nu_s.imag() == doctest::Approx(0.0));
    CHECK(mu_s.imag() != doctest::Approx(0.0)); // off-diagonal feeds Im mu

    Mat2 diag_m = diag(3.0, 1.0);
    auto [mu_d, nu_d] = beltrami_dilatations(SigmaField::constant(diag_m, 3.0), Vec2(0, 0));
    CHECK(mu_d.imag() == doctest::Approx(0.0));
    CHECK(nu_d.imag() == doctest::Approx(0.0));
}

TEST_CASE("empirical k bound stays below one") {
    SigmaField sigma =
        SigmaField::from_exprs({"1 + x^2/2", "0", "0", "1"}, 1.5, Smoothness::Hoelder);
    BeltramiPair pair = beltrami_pair(sigma, disk_grid(12));
    CHECK(pair.k_bound < 1.0);
    CHECK(pair.k_bound > 0.0);
    auto [mu, nu] = pair.at(0.5, 0.0);
    CHECK(std::abs(mu) + std::abs(nu) <= pair.k_bound + 1e-14);
}

TEST_CASE("second dilatation") {
    CHECK(second_dilatation(Complex(0.2, 0.1), Complex(0, 0), Complex(5, 3)) ==
          Complex(0.2, 0.1));
    CHECK(second_dilatation(Complex(0.1, 0), Complex(0.2, 0), Complex(4, 0)).real() ==
          doctest::Approx(0.3));
    CHECK_THROWS_AS(second_dilatation(Complex(0.1, 0), Complex(0.2, 0), Complex(0, 0)),
                    VanishingDerivative);
}

TEST_CASE("sigma_tilde") {
    Mat2 id = sigma_tilde(Complex(0, 0));
    CHECK((id - Mat2::Identity()).norm() == doctest::Approx(0.0));

    double r = 0.4;
    Mat2 m = sigma_tilde(Complex(r, 0));
    CHECK(m(0, 0) == doctest::Approx((1 - r) / (1 + r)));
    CHECK(m(1, 1) == doctest::Approx((1 + r) / (1 - r)));
    CHECK(m(0, 1) == doctest::Approx(0.0));

    // unit determinant and symmetry on a grid of admissible dilatations
    for (double rr : {0.0, 0.3, 0.7, 0.95})
        for (double ang = 0.0; ang < 6.28; ang += 0.37) {
            Mat2 s = sigma_tilde(std::polar(rr, ang));
            CHECK(std::abs(s.determinant() - 1.0) < 1e-12);
            CHECK(std::abs(s(0, 1) - s(1, 0)) < 1e-14);
        }

    CHECK_THROWS_AS(sigma_tilde(Complex(1.0, 0.0)), DegenerateDilatation);
}

TEST_CASE("smoothness tags round trip") {
    for (auto s : {Smoothness::Hoelder, Smoothness::Lipschitz, Smoothness::Smooth})
        CHECK(smoothness_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(smoothness_from_string("C-infinity"), ScenarioError);
}
