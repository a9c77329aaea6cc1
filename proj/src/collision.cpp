#include "graspkde/collision.hpp"

#include <algorithm>
#include <cmath>

#include "graspkde/errors.hpp"
#include "graspkde/surface_features.hpp"

namespace graspkde {

namespace {

constexpr double kQueryMargin = 0.02;

std::vector<Eigen::Vector3d> pseudo_normals(const PointCloud& cloud) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(cloud.points.size());
    for (const Eigen::Vector3d& p : cloud.points) {
        const Eigen::Vector3d to_view = cloud.viewpoint - p;
        out.push_back(to_view.norm() > 1e-12 ? to_view.normalized()
                                             : Eigen::Vector3d::UnitZ());
    }
    return out;
}

}  // namespace

CollisionChecker::CollisionChecker(const PointCloud& cloud, int k_nn) : tree_(cloud.points) {
    if (cloud.points.empty()) throw DataError("CollisionChecker: empty cloud");
    if (cloud.points.size() > static_cast<std::size_t>(k_nn)) {
        try {
            normals_ = estimate_normals(cloud, k_nn);
            return;
        } catch (const DegenerateError&) {
        }
    }
    normals_ = pseudo_normals(cloud);
}

double CollisionChecker::penetration_depth(const LinkGeometry& geom, const Pose& link_pose) const {
    std::vector<std::size_t> near =
        tree_.radius(link_pose.p, bounding_radius(geom) + kQueryMargin);
    if (near.empty()) near.push_back(tree_.nearest(link_pose.p).first);

    double best_sd = std::numeric_limits<double>::infinity();
    std::size_t best_idx = near.front();
    for (std::size_t idx : near) {
        const double sd = signed_distance(geom, link_pose, tree_.points()[idx]);
        if (sd < best_sd) {
            best_sd = sd;
            best_idx = idx;
        }
    }
    if (best_sd < 0.0) return -best_sd;

    const Eigen::Vector3d& q = tree_.points()[best_idx];
    const Eigen::Vector3d a = closest_surface_point(geom, link_pose, q);
    if ((a - q).dot(normals_[best_idx]) < 0.0) return best_sd;
    return 0.0;
}

double CollisionChecker::max_penetration(const HandDescription& hand, const Trajectory& traj) const {
    double depth = 0.0;
    for (const TrajectoryPoint& pt : traj.points) {
        const std::vector<Pose> poses = forward_kinematics(hand, pt.state.h_w, pt.state.h_c);
        for (int i = 0; i < hand.num_links(); ++i)
            depth = std::max(depth, penetration_depth(hand.link(i).geometry,
                                                      poses[static_cast<std::size_t>(i)]));
    }
    return depth;
}

double CollisionChecker::log_expert(const HandDescription& hand, const Trajectory& traj,
                                    double beta) const {
    return -beta * max_penetration(hand, traj);
}

}  // namespace graspkde
