#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace graspkde {

/// Rigid-body pose: position plus unit quaternion. The quaternion is
/// renormalized on construction and after every composition so the unit
/// invariant survives long chains.
struct Pose {
    Eigen::Vector3d p{Eigen::Vector3d::Zero()};
    Eigen::Quaterniond q{Eigen::Quaterniond::Identity()};

    Pose() = default;

    Pose(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation)
        : p(position), q(orientation) {
        const double n = q.norm();
        if (!(n > 1e-12) || !std::isfinite(n))
            throw std::invalid_argument("Pose: quaternion norm too small or not finite");
        q.coeffs() /= n;
    }

    static Pose identity() { return Pose{}; }
};

/// a followed by b expressed in a's frame (homogeneous product T_a * T_b).
inline Pose compose(const Pose& a, const Pose& b) {
    Pose out;
    out.q = a.q * b.q;
    out.q.normalize();
    out.p = a.p + a.q * b.p;
    return out;
}

inline Pose inverse(const Pose& v) {
    Pose out;
    out.q = v.q.conjugate();
    out.p = -(out.q * v.p);
    return out;
}

inline Eigen::Vector3d transform_point(const Pose& v, const Eigen::Vector3d& x) {
    return v.p + v.q * x;
}

/// Geodesic angle between orientations, antipodal-safe: q and -q are the
/// same rotation and give angle 0.
inline double quat_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
    const double d = std::min(1.0, std::abs(a.dot(b)));
    return 2.0 * std::acos(d);
}

/// Unit quaternion from a rotation vector (axis * angle).
inline Eigen::Quaterniond quat_exp(const Eigen::Vector3d& w) {
    const double angle = w.norm();
    if (angle < 1e-12) {
        Eigen::Quaterniond q(1.0, 0.5 * w.x(), 0.5 * w.y(), 0.5 * w.z());
        q.normalize();
        return q;
    }
    const Eigen::Vector3d axis = w / angle;
    return Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
}

inline bool approx_equal(const Pose& a, const Pose& b, double pos_tol, double quat_tol) {
    return (a.p - b.p).norm() <= pos_tol &&
           1.0 - std::abs(a.q.dot(b.q)) <= quat_tol;
}

}  // namespace graspkde
