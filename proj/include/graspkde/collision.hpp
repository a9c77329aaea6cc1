#pragma once

#include <vector>

#include "graspkde/cloud.hpp"
#include "graspkde/hand.hpp"
#include "graspkde/kdtree.hpp"
#include "graspkde/link_geometry.hpp"

namespace graspkde {

/// Soft collision expert against a single-view cloud. A cloud is a surface,
/// not a volume, so depth for a link is: the magnitude of any negative
/// signed distance to a nearby point, or, when the link is wholly behind
/// the local surface (displacement from the nearest point opposes its
/// outward normal), its distance to that point. The expert over a
/// trajectory is exp(-beta * greatest depth anywhere along it).
class CollisionChecker {
public:
    /// Estimates per-point normals for the inside/outside test; clouds too
    /// sparse or degenerate for PCA fall back to viewpoint-facing
    /// pseudo-normals.
    explicit CollisionChecker(const PointCloud& cloud, int k_nn = 20);

    /// Penetration depth of one link at one pose; 0 when clear.
    double penetration_depth(const LinkGeometry& geom, const Pose& link_pose) const;

    /// Greatest penetration over all states and links.
    double max_penetration(const HandDescription& hand, const Trajectory& traj) const;

    /// log of the expert: -beta * max_penetration.
    double log_expert(const HandDescription& hand, const Trajectory& traj, double beta) const;

private:
    KdTree3 tree_;
    std::vector<Eigen::Vector3d> normals_;
};

}  // namespace graspkde
