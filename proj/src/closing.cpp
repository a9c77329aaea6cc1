#include "graspkde/closing.hpp"

#include <algorithm>
#include <cmath>

#include "graspkde/errors.hpp"
#include "graspkde/kdtree.hpp"
#include "graspkde/link_geometry.hpp"

namespace graspkde {

namespace {

/// Smallest signed distance from the link surface to any cloud point, or
/// +inf when nothing is near. Any point within `margin` of the surface lies
/// within bounding_radius + margin of the link origin, so the radius query
/// cannot miss a contact.
double min_link_distance(const LinkGeometry& geom, const Pose& link_pose, const KdTree3& tree,
                         double margin) {
    const double reach = bounding_radius(geom) + margin + 1e-3;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t idx : tree.radius(link_pose.p, reach))
        best = std::min(best, signed_distance(geom, link_pose, tree.points()[idx]));
    return best;
}

}  // namespace

ClosingResult close_against_cloud(const HandDescription& hand, const std::vector<Pose>& wrist,
                                  const std::vector<double>& motor, const PointCloud& cloud,
                                  const ClosingParams& params) {
    if (wrist.size() != motor.size())
        throw DataError("close_against_cloud: wrist/motor length mismatch");
    if (wrist.size() < 2) throw DataError("close_against_cloud: needs at least two steps");
    if (!(params.joint_rate > 0.0)) throw DataError("close_against_cloud: joint rate must be positive");

    const KdTree3 tree(cloud.points);
    const std::size_t steps = wrist.size();

    ClosingResult out;
    out.frozen_at.assign(static_cast<std::size_t>(hand.dof()), -1);
    Eigen::VectorXd h_c = synergy_targets(hand, motor[0]);

    for (std::size_t k = 0; k < steps; ++k) {
        const std::vector<Pose> poses = forward_kinematics(hand, wrist[k], h_c);

        for (int i = 0; i < hand.num_links(); ++i) {
            const int j = hand.joint_index(i);
            if (j < 0 || out.frozen_at[static_cast<std::size_t>(j)] >= 0) continue;
            const double d = min_link_distance(hand.link(i).geometry,
                                               poses[static_cast<std::size_t>(i)], tree,
                                               params.contact_threshold);
            if (d < params.contact_threshold)
                out.frozen_at[static_cast<std::size_t>(j)] = static_cast<int>(k);
        }

        TrajectoryPoint pt;
        pt.t = static_cast<double>(k);
        pt.state = {wrist[k], h_c, motor[k]};
        out.trajectory.points.push_back(std::move(pt));

        if (k + 1 == steps) break;
        const Eigen::VectorXd target = synergy_targets(hand, motor[k + 1]);
        for (int j = 0; j < hand.dof(); ++j) {
            if (out.frozen_at[static_cast<std::size_t>(j)] >= 0) continue;
            h_c[j] += std::clamp(target[j] - h_c[j], -params.joint_rate, params.joint_rate);
        }
    }
    return out;
}

ApproachPlan linear_approach(const ApproachSpec& spec) {
    if (spec.approach_steps < 1 || spec.close_steps < 1)
        throw DataError("linear_approach: step counts must be positive");
    ApproachPlan plan;
    plan.wrist.reserve(static_cast<std::size_t>(spec.approach_steps + spec.close_steps));
    plan.motor.reserve(plan.wrist.capacity());

    for (int k = 0; k < spec.approach_steps; ++k) {
        const double a = spec.approach_steps == 1
                             ? 1.0
                             : static_cast<double>(k) / (spec.approach_steps - 1);
        Pose v;
        v.p = (1.0 - a) * spec.start.p + a * spec.end.p;
        v.q = spec.start.q.slerp(a, spec.end.q);
        plan.wrist.push_back(v);
        plan.motor.push_back(0.0);
    }
    for (int k = 0; k < spec.close_steps; ++k) {
        plan.wrist.push_back(spec.end);
        plan.motor.push_back(static_cast<double>(k + 1) / spec.close_steps);
    }
    return plan;
}

}  // namespace graspkde
