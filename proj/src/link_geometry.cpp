#include "graspkde/link_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "graspkde/errors.hpp"

namespace graspkde {

namespace {

struct SurfaceQuery {
    Eigen::Vector3d point;  // on the surface, link frame
    double signed_dist;
};

SurfaceQuery query_capsule(const Eigen::Vector3d& dims, const Eigen::Vector3d& p) {
    const double radius = dims[0];
    const double t = std::clamp(p.z(), 0.0, dims[1]);
    const Eigen::Vector3d axis_point(0.0, 0.0, t);
    const Eigen::Vector3d d = p - axis_point;
    const double dist = d.norm();
    if (dist > 0.0)
        return {axis_point + d * (radius / dist), dist - radius};
    return {axis_point + Eigen::Vector3d(radius, 0.0, 0.0), -radius};
}

SurfaceQuery query_box(const Eigen::Vector3d& dims, const Eigen::Vector3d& p) {
    const Eigen::Vector3d half = 0.5 * dims;
    const Eigen::Vector3d clamped = p.cwiseMax(-half).cwiseMin(half);
    if (clamped != p) return {clamped, (p - clamped).norm()};
    // Interior: snap to the nearest face.
    int face = 0;
    double margin = half[0] - std::abs(p[0]);
    for (int a = 1; a < 3; ++a) {
        const double m = half[a] - std::abs(p[a]);
        if (m < margin) {
            margin = m;
            face = a;
        }
    }
    Eigen::Vector3d out = p;
    out[face] = p[face] >= 0.0 ? half[face] : -half[face];
    return {out, -margin};
}

SurfaceQuery query_local(const LinkGeometry& geom, const Eigen::Vector3d& p) {
    return geom.type == LinkGeometry::Type::Capsule ? query_capsule(geom.dims, p)
                                                    : query_box(geom.dims, p);
}

}  // namespace

void validate(const LinkGeometry& geom) {
    if (geom.type == LinkGeometry::Type::Capsule) {
        if (!(geom.dims[0] > 0.0) || !(geom.dims[1] > 0.0))
            throw DataError("link geometry: capsule radius and length must be positive");
        return;
    }
    if (!(geom.dims[0] > 0.0) || !(geom.dims[1] > 0.0) || !(geom.dims[2] > 0.0))
        throw DataError("link geometry: box edges must be positive");
}

double bounding_radius(const LinkGeometry& geom) {
    if (geom.type == LinkGeometry::Type::Capsule) return geom.dims[1] + geom.dims[0];
    return 0.5 * geom.dims.norm();
}

Eigen::Vector3d centroid(const LinkGeometry& geom) {
    if (geom.type == LinkGeometry::Type::Capsule)
        return Eigen::Vector3d(0.0, 0.0, 0.5 * geom.dims[1]);
    return Eigen::Vector3d::Zero();
}

Eigen::Vector3d closest_surface_point(const LinkGeometry& geom, const Pose& link_pose,
                                      const Eigen::Vector3d& p) {
    const Eigen::Vector3d local = transform_point(inverse(link_pose), p);
    return transform_point(link_pose, query_local(geom, local).point);
}

double signed_distance(const LinkGeometry& geom, const Pose& link_pose, const Eigen::Vector3d& p) {
    const Eigen::Vector3d local = transform_point(inverse(link_pose), p);
    return query_local(geom, local).signed_dist;
}

}  // namespace graspkde
