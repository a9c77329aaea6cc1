#pragma once

#include <vector>

#include "graspkde/cloud.hpp"
#include "graspkde/hand.hpp"

namespace graspkde {

struct ClosingParams {
    /// Breakaway: a joint freezes when its link surface comes within this
    /// distance (m) of any cloud point.
    double contact_threshold = 0.002;
    /// Per-step cap on joint motion (rad).
    double joint_rate = 0.02;
};

struct ClosingResult {
    Trajectory trajectory;
    /// Per joint, the step at which it froze, or -1 if it never touched.
    std::vector<int> frozen_at;

    bool made_contact() const {
        for (int s : frozen_at)
            if (s >= 0) return true;
        return false;
    }
};

/// Kinematic closing against a cloud: the wrist follows the given poses while
/// each joint chases its synergy target at a capped rate, freezing on
/// contact. One state is recorded per input step (before that step's joint
/// advance), so the trajectory starts at synergy_targets(motor[0]) exactly
/// and its final state is the equilibrium. Wrist and motor sequences must
/// have equal length >= 2.
ClosingResult close_against_cloud(const HandDescription& hand, const std::vector<Pose>& wrist,
                                  const std::vector<double>& motor, const PointCloud& cloud,
                                  const ClosingParams& params = {});

struct ApproachSpec {
    Pose start;
    Pose end;
    int approach_steps = 40;
    int close_steps = 80;
};

struct ApproachPlan {
    std::vector<Pose> wrist;
    std::vector<double> motor;
};

/// Straight-line wrist motion from start to end with the motor at zero, then
/// a hold at the end pose while the motor ramps linearly to exactly 1.
ApproachPlan linear_approach(const ApproachSpec& spec);

}  // namespace graspkde
