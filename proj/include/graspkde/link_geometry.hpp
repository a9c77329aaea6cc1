#pragma once

#include <Eigen/Core>

#include "graspkde/pose.hpp"

namespace graspkde {

/// Contact/collision primitive for one hand link, in the link frame.
///
/// Box: centred on the origin, dims = full edge lengths.
/// Capsule: sphere of radius dims[0] swept along the segment from the origin
/// to (0, 0, dims[1]); the link origin sits at the joint, so a phalanx
/// extends along its local +z. dims[2] is unused for capsules.
struct LinkGeometry {
    enum class Type { Capsule, Box };
    Type type = Type::Box;
    Eigen::Vector3d dims = Eigen::Vector3d::Zero();
};

/// Throws DataError unless the dimensions the type uses are strictly
/// positive (radius and length for capsules, all three edges for boxes).
void validate(const LinkGeometry& geom);

/// Radius of the smallest origin-centred sphere enclosing the primitive.
double bounding_radius(const LinkGeometry& geom);

/// Centroid of the primitive in the link frame; with bounding_radius this
/// gives a broad-phase sphere for cloud queries.
Eigen::Vector3d centroid(const LinkGeometry& geom);

/// Closest point on the link surface to p, both in world coordinates. Exact
/// for both primitives. Interior queries resolve to the nearest face (boxes)
/// or the radially nearest surface point (capsules); a query exactly on a
/// capsule's axis breaks the tie along local +x so the result is
/// deterministic.
Eigen::Vector3d closest_surface_point(const LinkGeometry& geom, const Pose& link_pose,
                                      const Eigen::Vector3d& p);

/// Distance from p to the link surface, negative when p is inside.
double signed_distance(const LinkGeometry& geom, const Pose& link_pose, const Eigen::Vector3d& p);

}  // namespace graspkde
