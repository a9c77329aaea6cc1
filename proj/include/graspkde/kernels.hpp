#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "graspkde/pose.hpp"

namespace graspkde {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Kernel bandwidth triple: position stddev [m], orientation concentration
/// (von Mises-Fisher kappa), curvature stddev [1/m].
struct Bandwidth {
    double sigma_p;
    double sigma_q;
    double sigma_r;

    Bandwidth(double sp, double sq, double sr) : sigma_p(sp), sigma_q(sq), sigma_r(sr) {
        if (!(sigma_p > 0.0) || !(sigma_q > 0.0) || !(sigma_r > 0.0))
            throw std::invalid_argument("Bandwidth: all components must be positive");
    }
};

/// Surface feature: local frame pose plus the two principal curvatures,
/// stored in canonical order r(0) >= r(1).
struct Feature {
    Pose v;
    Eigen::Vector2d r{Eigen::Vector2d::Zero()};

    Feature() = default;

    Feature(const Pose& pose, const Eigen::Vector2d& curvature) : v(pose), r(curvature) {
        if (!std::isfinite(r.x()) || !std::isfinite(r.y()))
            throw std::invalid_argument("Feature: curvatures must be finite");
        if (r.x() < r.y()) std::swap(r.x(), r.y());
    }
};

/// log of the n-variate isotropic Gaussian given the squared distance.
inline double log_gauss_iso(double dist2, double sigma, int n) {
    return -0.5 * dist2 / (sigma * sigma) - 0.5 * n * (kLog2Pi + 2.0 * std::log(sigma));
}

inline double log_gauss3(const Eigen::Vector3d& x, const Eigen::Vector3d& mu, double sigma) {
    return log_gauss_iso((x - mu).squaredNorm(), sigma, 3);
}

inline double log_gauss2(const Eigen::Vector2d& x, const Eigen::Vector2d& mu, double sigma) {
    return log_gauss_iso((x - mu).squaredNorm(), sigma, 2);
}

/// log I1(x), modified Bessel function of the first kind. The moderate
/// regime delegates to the standard library; the large-argument regime uses
/// the asymptotic expansion through 1/x^5, whose first dropped term is below
/// 1e-13 relative from the switch point on. The expansion also avoids the
/// overflow of I1 itself past x ~ 709.
inline double log_bessel_i1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("log_bessel_i1: x must be positive");
    if (x < 140.0) return std::log(std::cyl_bessel_i(1.0, x));
    const double ix = 1.0 / x;
    const double corr = -(((((72765.0 / 262144.0) * ix + 4725.0 / 32768.0) * ix + 105.0 / 1024.0) * ix +
                           15.0 / 128.0) *
                              ix +
                          3.0 / 8.0) *
                        ix;
    return x - 0.5 * std::log(2.0 * M_PI * x) + std::log1p(corr);
}

/// log C4(kappa): normalizer of the antipodal vMF pair on the unit-quaternion
/// sphere S^3, i.e. the constant making
///   Theta(q | mu, kappa) = C4 * (exp(kappa mu.q) + exp(-kappa mu.q)) / 2
/// integrate to one over S^3.
inline double log_c4(double kappa) {
    return std::log(kappa) - 2.0 * std::log(2.0 * M_PI) - log_bessel_i1(kappa);
}

/// As log_theta but with log_c4(kappa) precomputed by the caller; hot loops
/// evaluate thousands of kernels against a fixed bandwidth and must not pay
/// for the Bessel normalizer each time.
inline double log_theta_given_c4(const Eigen::Quaterniond& q, const Eigen::Quaterniond& mu, double kappa,
                                 double lc4) {
    const double a = kappa * std::abs(mu.dot(q));
    // log((e^a + e^-a)/2) evaluated without overflow
    return lc4 + a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

/// log Theta: antipodal von Mises-Fisher density over unit quaternions.
/// Symmetric under q -> -q, so it respects the double cover of SO(3).
inline double log_theta(const Eigen::Quaterniond& q, const Eigen::Quaterniond& mu, double kappa) {
    return log_theta_given_c4(q, mu, kappa, log_c4(kappa));
}

inline double eval_theta(const Eigen::Quaterniond& q, const Eigen::Quaterniond& mu, double kappa) {
    return std::exp(log_theta(q, mu, kappa));
}

/// log of the factorised feature kernel: N3(position) * Theta(orientation)
/// * N2(curvature).
inline double log_kernel(const Feature& x, const Feature& mu, const Bandwidth& bw) {
    return log_gauss3(x.v.p, mu.v.p, bw.sigma_p) +
           log_theta(x.v.q, mu.v.q, bw.sigma_q) +
           log_gauss2(x.r, mu.r, bw.sigma_r);
}

inline double log_kernel_given_c4(const Feature& x, const Feature& mu, const Bandwidth& bw, double lc4) {
    return log_gauss3(x.v.p, mu.v.p, bw.sigma_p) +
           log_theta_given_c4(x.v.q, mu.v.q, bw.sigma_q, lc4) +
           log_gauss2(x.r, mu.r, bw.sigma_r);
}

inline double eval_kernel(const Feature& x, const Feature& mu, const Bandwidth& bw) {
    return std::exp(log_kernel(x, mu, bw));
}

/// Pose-only kernel (no curvature factor), used by query densities.
inline double log_pose_kernel(const Pose& x, const Pose& mu, double sigma_p, double sigma_q) {
    return log_gauss3(x.p, mu.p, sigma_p) + log_theta(x.q, mu.q, sigma_q);
}

inline double log_pose_kernel_given_c4(const Pose& x, const Pose& mu, double sigma_p, double sigma_q,
                                       double lc4) {
    return log_gauss3(x.p, mu.p, sigma_p) + log_theta_given_c4(x.q, mu.q, sigma_q, lc4);
}

/// Draw from the antipodal vMF: tangent-space Gaussian at the mean with
/// stddev 1/sqrt(kappa), exponential-mapped onto S^3, then a fair sign flip.
/// Accurate for the concentrations used here (kappa >> 1).
template <typename Rng>
Eigen::Quaterniond sample_theta(const Eigen::Quaterniond& mu, double kappa, Rng& rng) {
    const Eigen::Vector4d m = mu.coeffs();  // (x, y, z, w)
    // Orthonormal tangent basis at mu from a Householder QR of [m].
    Eigen::Matrix4d basis = Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>>(m)
                                .householderQ();
    const double s = 1.0 / std::sqrt(kappa);
    const Eigen::Vector3d t(s * rng.gauss(), s * rng.gauss(), s * rng.gauss());
    const double angle = t.norm();
    Eigen::Vector4d dir = Eigen::Vector4d::Zero();
    if (angle > 0.0)
        dir = (basis.col(1) * t.x() + basis.col(2) * t.y() + basis.col(3) * t.z()) / angle;
    Eigen::Vector4d out = std::cos(angle) * m + std::sin(angle) * dir;
    out.normalize();
    if (rng.uniform() < 0.5) out = -out;
    return Eigen::Quaterniond(out);  // Vector4d ctor takes (x, y, z, w) coeffs
}

}  // namespace graspkde
