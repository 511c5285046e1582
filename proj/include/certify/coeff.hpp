#pragma once

#include "certify/expr.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace certify {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Complex = std::complex<double>;

enum class Smoothness { Hoelder, Lipschitz, Smooth };

std::string to_string(Smoothness s);
Smoothness smoothness_from_string(const std::string& s);

/// A 2x2 coefficient field on the closed unit disk with a declared
/// ellipticity constant K >= 1.
class SigmaField {
  public:
    SigmaField() = default;
    SigmaField(std::function<Mat2(double, double)> fn, double K, Smoothness smoothness);

    static SigmaField identity();
    static SigmaField constant(const Mat2& m, double K, Smoothness smoothness = Smoothness::Smooth);
    static SigmaField from_exprs(const std::array<std::string, 4>& entries, double K,
                                 Smoothness smoothness);

    Mat2 at(double x, double y) const { return fn_(x, y); }
    Mat2 at(const Vec2& p) const { return fn_(p.x(), p.y()); }
    double K() const { return K_; }
    Smoothness smoothness() const { return smoothness_; }

  private:
    std::function<Mat2(double, double)> fn_;
    double K_ = 1.0;
    Smoothness smoothness_ = Smoothness::Smooth;
};

struct EllipticityCertificate {
    double min_quad = 0.0;      // min over points/directions of sigma xi . xi
    double min_inv_quad = 0.0;  // same for sigma^{-1}
    double min_det = 0.0;
    Vec2 worst_point = Vec2::Zero();
    bool pass = false;
};

/// Samples the quadratic forms of sigma and sigma^{-1} over the given points
/// and a uniform direction grid. Throws NonInvertibleSigma when det sigma <= 0
/// at some point.
EllipticityCertificate check_ellipticity(const SigmaField& sigma, const std::vector<Vec2>& points,
                                         int n_directions = 32, double tol = 1e-10);

/// The reduction of div(sigma grad u) = 0 to div(A grad u) + b . grad u = 0
/// with det A = 1. All members evaluate pointwise.
struct AbForm {
    std::function<Mat2(double, double)> sigma_hat;   // symmetric part
    std::function<Mat2(double, double)> sigma_check; // skew part
    std::function<double(double, double)> gamma;     // sqrt(det sigma_hat)
    std::function<Mat2(double, double)> A;           // sigma_hat / gamma
    std::function<Vec2(double, double)> b;           // drift, by finite differences
    double step = 0.0;
};

/// Requires Lipschitz or Smooth entries; the drift needs derivatives.
/// Derivatives of gamma and sigma_check use central differences of the given
/// step, falling back to one-sided within `step` of the unit circle.
AbForm reduce_to_ab(const SigmaField& sigma, double step);

/// Complex dilatations (mu, nu) of the Beltrami equation satisfied by
/// f = u + iv.
std::pair<Complex, Complex> beltrami_dilatations(const SigmaField& sigma, const Vec2& point);

struct BeltramiPair {
    std::function<std::pair<Complex, Complex>(double, double)> at;
    double k_bound = 0.0; // empirical max of |mu|+|nu| over the sampled points
};

BeltramiPair beltrami_pair(const SigmaField& sigma, const std::vector<Vec2>& sample_points);

/// mu_tilde = mu + (conj f_z / f_z) nu. Throws VanishingDerivative when
/// |f_z| < tol.
Complex second_dilatation(Complex mu, Complex nu, Complex f_z, double tol = 1e-14);

/// The unit-determinant symmetric matrix associated with a dilatation
/// mu_tilde, |mu_tilde| < 1.
Mat2 sigma_tilde(Complex mu_tilde);

} // namespace certify
