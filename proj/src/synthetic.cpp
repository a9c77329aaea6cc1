#include "graspkde/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "graspkde/errors.hpp"

namespace graspkde {
namespace {

constexpr double kPi = std::numbers::pi;

struct SurfaceSample {
    Eigen::Vector3d p;
    Eigen::Vector3d n;
};

void check_spec(const ShapeSpec& spec) {
    const int needed = spec.shape == Shape::Sphere ? 1 : spec.shape == Shape::Cylinder ? 2 : 3;
    for (int i = 0; i < needed; ++i)
        if (!std::isfinite(spec.dims[i]) || spec.dims[i] <= 0.0)
            throw DataError("shape dimensions must be positive");
    if (!std::isfinite(spec.density) || spec.density <= 0.0) throw DataError("density must be positive");
    if (!std::isfinite(spec.noise) || spec.noise < 0.0) throw DataError("noise must be non-negative");
}

Eigen::Vector3d unit_sphere(RandomStream& rng) {
    for (;;) {
        const Eigen::Vector3d u = rng.gauss3();
        const double n = u.norm();
        if (n > 1e-12) return u / n;
    }
}

SurfaceSample sample_sphere(double r, RandomStream& rng) {
    const Eigen::Vector3d u = unit_sphere(rng);
    return {r * u, u};
}

SurfaceSample sample_cylinder(double r, double h, RandomStream& rng) {
    const double side = 2.0 * kPi * r * h;
    const double cap = kPi * r * r;
    double pick = rng.uniform() * (side + 2.0 * cap);
    if (pick < side) {
        const double phi = rng.uniform() * 2.0 * kPi;
        const double z = (rng.uniform() - 0.5) * h;
        const Eigen::Vector3d n(std::cos(phi), std::sin(phi), 0.0);
        return {{r * n.x(), r * n.y(), z}, n};
    }
    const double sign = pick < side + cap ? 1.0 : -1.0;
    const double rho = r * std::sqrt(rng.uniform());
    const double phi = rng.uniform() * 2.0 * kPi;
    return {{rho * std::cos(phi), rho * std::sin(phi), sign * 0.5 * h}, {0.0, 0.0, sign}};
}

SurfaceSample sample_box(const Eigen::Vector3d& s, RandomStream& rng) {
    const double areas[3] = {s.y() * s.z(), s.z() * s.x(), s.x() * s.y()};
    double pick = rng.uniform() * 2.0 * (areas[0] + areas[1] + areas[2]);
    int axis = 2;
    for (int a = 0; a < 2; ++a) {
        if (pick < 2.0 * areas[a]) {
            axis = a;
            break;
        }
        pick -= 2.0 * areas[a];
    }
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const int u = (axis + 1) % 3, v = (axis + 2) % 3;
    Eigen::Vector3d p, n = Eigen::Vector3d::Zero();
    p[axis] = sign * 0.5 * s[axis];
    p[u] = (rng.uniform() - 0.5) * s[u];
    p[v] = (rng.uniform() - 0.5) * s[v];
    n[axis] = sign;
    return {p, n};
}

SurfaceSample sample_ellipsoid(const Eigen::Vector3d& ax, RandomStream& rng) {
    // u uniform on the sphere mapped through diag(ax) magnifies area by
    // ax.prod() * |g| with g = diag(1/ax) u, so thin by amin * |g| <= 1 to get
    // uniform-by-area samples on the ellipsoid.
    const double amin = ax.minCoeff();
    for (;;) {
        const Eigen::Vector3d u = unit_sphere(rng);
        const Eigen::Vector3d g = u.cwiseQuotient(ax);
        if (rng.uniform() <= amin * g.norm()) return {ax.cwiseProduct(u), g.normalized()};
    }
}

double ellipsoid_area(const Eigen::Vector3d& ax) {
    // Area = abc * integral over S2 of |diag(1/ax) u|, written in (t, phi)
    // with t = cos(theta). The integrand is smooth, so Simpson in t and a
    // periodic trapezoid in phi converge fast.
    const double a2 = ax.x() * ax.x(), b2 = ax.y() * ax.y(), c2 = ax.z() * ax.z();
    constexpr int nt = 256, nphi = 256;
    double sum = 0.0;
    for (int j = 0; j < nphi; ++j) {
        const double phi = 2.0 * kPi * j / nphi;
        const double cp = std::cos(phi), sp = std::sin(phi);
        const double wt = cp * cp / a2 + sp * sp / b2;
        double inner = 0.0;
        for (int i = 0; i <= nt; ++i) {
            const double t = -1.0 + 2.0 * i / nt;
            const double w = (i == 0 || i == nt) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            inner += w * std::sqrt((1.0 - t * t) * wt + t * t / c2);
        }
        sum += inner * (2.0 / nt) / 3.0;
    }
    return ax.prod() * sum * (2.0 * kPi / nphi);
}

}  // namespace

Shape parse_shape(const std::string& name) {
    if (name == "sphere") return Shape::Sphere;
    if (name == "cylinder") return Shape::Cylinder;
    if (name == "box") return Shape::Box;
    if (name == "ellipsoid") return Shape::Ellipsoid;
    throw DataError("unknown shape '" + name + "'");
}

double surface_area(const ShapeSpec& spec) {
    check_spec(spec);
    const Eigen::Vector3d& d = spec.dims;
    switch (spec.shape) {
        case Shape::Sphere:
            return 4.0 * kPi * d[0] * d[0];
        case Shape::Cylinder:
            return 2.0 * kPi * d[0] * d[1] + 2.0 * kPi * d[0] * d[0];
        case Shape::Box:
            return 2.0 * (d.x() * d.y() + d.y() * d.z() + d.z() * d.x());
        case Shape::Ellipsoid:
            return ellipsoid_area(d);
    }
    throw DataError("unknown shape");
}

PointCloud generate_cloud(const ShapeSpec& spec, RandomStream& rng) {
    const double area = surface_area(spec);
    const long total = std::lround(spec.density * area);
    if (total <= 0) throw DataError("density too low for the shape's surface area");

    // Sampling and culling run in the shape frame; only kept points move to
    // the world frame.
    const Eigen::Vector3d vp_local = transform_point(inverse(spec.pose), spec.viewpoint);

    PointCloud cloud;
    cloud.viewpoint = spec.viewpoint;
    cloud.points.reserve(static_cast<std::size_t>(total / 2 + 1));
    for (long i = 0; i < total; ++i) {
        SurfaceSample s;
        switch (spec.shape) {
            case Shape::Sphere:
                s = sample_sphere(spec.dims[0], rng);
                break;
            case Shape::Cylinder:
                s = sample_cylinder(spec.dims[0], spec.dims[1], rng);
                break;
            case Shape::Box:
                s = sample_box(spec.dims, rng);
                break;
            case Shape::Ellipsoid:
                s = sample_ellipsoid(spec.dims, rng);
                break;
        }
        if (s.n.dot(vp_local - s.p) <= 0.0) continue;
        Eigen::Vector3d p = transform_point(spec.pose, s.p);
        if (spec.noise > 0.0) p += spec.noise * rng.gauss3();
        cloud.points.push_back(p);
    }
    if (cloud.points.empty()) throw DataError("no surface points face the viewpoint");
    return cloud;
}

}  // namespace graspkde
