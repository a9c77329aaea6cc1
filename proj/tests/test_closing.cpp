#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "graspkde/closing.hpp"
#include "graspkde/errors.hpp"
#include "graspkde/hand.hpp"
#include "graspkde/link_geometry.hpp"

using graspkde::ApproachSpec;
using graspkde::ClosingParams;
using graspkde::ClosingResult;
using graspkde::DataError;
using graspkde::HandDescription;
using graspkde::PointCloud;
using graspkde::Pose;

namespace {

// Vertical plane of points at x = -0.045 in front of the left finger's sweep,
// clear of the palm.
PointCloud blocking_plane() {
    PointCloud cloud;
    for (double y = -0.03; y <= 0.03 + 1e-12; y += 0.001)
        for (double z = 0.025; z <= 0.12 + 1e-12; z += 0.001)
            cloud.points.emplace_back(-0.045, y, z);
    cloud.viewpoint = Eigen::Vector3d(-1.0, 0.0, 0.0);
    return cloud;
}

std::vector<Pose> still_wrist(std::size_t n) { return std::vector<Pose>(n); }

std::vector<double> motor_ramp(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

}  // namespace

TEST_SUITE("closing") {

    TEST_CASE("free closing reaches the synergy targets with nothing frozen") {
        const HandDescription hand = graspkde::make_default_hand();
        PointCloud cloud;
        cloud.points.emplace_back(0.0, 0.0, -10.0);

        const ClosingResult res =
            close_against_cloud(hand, still_wrist(60), motor_ramp(60), cloud);
        CHECK_FALSE(res.made_contact());
        for (int s : res.frozen_at) CHECK(s == -1);
        REQUIRE(res.trajectory.points.size() == 60);
        const Eigen::VectorXd want = synergy_targets(hand, 1.0);
        CHECK(res.trajectory.equilibrium().h_c == want);
        CHECK(res.trajectory.equilibrium().h_m == 1.0);
        CHECK(res.trajectory.points.front().state.h_c.norm() == 0.0);
    }

    TEST_CASE("blocking plane freezes one finger; the other reaches its target") {
        const HandDescription hand = graspkde::make_default_hand();
        const PointCloud cloud = blocking_plane();
        const std::size_t steps = 60;
        const auto wrist = still_wrist(steps);
        const auto motor = motor_ramp(steps);
        const ClosingParams params;

        const ClosingResult res = close_against_cloud(hand, wrist, motor, cloud, params);

        // Brute-force replica of the closing loop, scanning every cloud
        // point per link instead of the tree query.
        std::vector<int> frozen(4, -1);
        Eigen::VectorXd h_c = synergy_targets(hand, motor[0]);
        for (std::size_t k = 0; k < steps; ++k) {
            const auto poses = forward_kinematics(hand, wrist[k], h_c);
            for (int i = 0; i < hand.num_links(); ++i) {
                const int j = hand.joint_index(i);
                if (j < 0 || frozen[static_cast<std::size_t>(j)] >= 0) continue;
                double best = std::numeric_limits<double>::infinity();
                for (const Eigen::Vector3d& p : cloud.points)
                    best = std::min(best, signed_distance(hand.link(i).geometry,
                                                          poses[static_cast<std::size_t>(i)], p));
                if (best < params.contact_threshold)
                    frozen[static_cast<std::size_t>(j)] = static_cast<int>(k);
            }
            if (k + 1 == steps) break;
            const Eigen::VectorXd target = synergy_targets(hand, motor[k + 1]);
            for (int j = 0; j < 4; ++j) {
                if (frozen[static_cast<std::size_t>(j)] >= 0) continue;
                h_c[j] += std::clamp(target[j] - h_c[j], -params.joint_rate, params.joint_rate);
            }
        }
        CHECK(res.frozen_at == frozen);
        CHECK(res.trajectory.equilibrium().h_c == h_c);

        // Left joints 0 (proximal) and 1 (distal) hit the plane early; the
        // right finger closes freely to its target.
        CHECK(res.frozen_at[0] >= 5);
        CHECK(res.frozen_at[0] <= 9);
        CHECK(res.frozen_at[1] >= 2);
        CHECK(res.frozen_at[1] <= 5);
        CHECK(res.frozen_at[2] == -1);
        CHECK(res.frozen_at[3] == -1);

        const Eigen::VectorXd targets = synergy_targets(hand, res.trajectory.equilibrium().h_m);
        const Eigen::VectorXd& eq = res.trajectory.equilibrium().h_c;
        CHECK(eq[0] < targets[0]);
        CHECK(eq[1] < targets[1]);
        CHECK(eq[2] == targets[2]);
        CHECK(eq[3] == targets[3]);
    }

    TEST_CASE("joint values never decrease under a non-decreasing ramp") {
        const HandDescription hand = graspkde::make_default_hand();
        const ClosingResult res =
            close_against_cloud(hand, still_wrist(60), motor_ramp(60), blocking_plane());
        for (std::size_t k = 1; k < res.trajectory.points.size(); ++k) {
            const Eigen::VectorXd& prev = res.trajectory.points[k - 1].state.h_c;
            const Eigen::VectorXd& cur = res.trajectory.points[k].state.h_c;
            for (int j = 0; j < 4; ++j) CHECK(cur[j] >= prev[j]);
        }
    }

    TEST_CASE("huge contact threshold freezes everything at step zero") {
        const HandDescription hand = graspkde::make_default_hand();
        ClosingParams params;
        params.contact_threshold = 10.0;
        const ClosingResult res =
            close_against_cloud(hand, still_wrist(20), motor_ramp(20), blocking_plane(), params);
        for (int s : res.frozen_at) CHECK(s == 0);
        CHECK(res.trajectory.equilibrium().h_c == res.trajectory.points.front().state.h_c);
        CHECK(res.trajectory.equilibrium().h_c.norm() == 0.0);
    }

    TEST_CASE("linear approach holds the motor closed exactly at the end") {
        ApproachSpec spec;
        spec.start = Pose(Eigen::Vector3d(0.0, 0.0, 0.3), Eigen::Quaterniond::Identity());
        spec.end = Pose(Eigen::Vector3d(0.0, 0.0, 0.1), Eigen::Quaterniond::Identity());
        const graspkde::ApproachPlan plan = linear_approach(spec);

        REQUIRE(plan.wrist.size() == 120);
        REQUIRE(plan.motor.size() == 120);
        for (int k = 0; k < 40; ++k) CHECK(plan.motor[static_cast<std::size_t>(k)] == 0.0);
        CHECK(plan.motor.back() == 1.0);
        CHECK((plan.wrist[39].p - spec.end.p).norm() == 0.0);
        for (int k = 40; k < 120; ++k)
            CHECK((plan.wrist[static_cast<std::size_t>(k)].p - spec.end.p).norm() == 0.0);
        // Midpoint of the approach leg sits on the segment.
        const Eigen::Vector3d mid = plan.wrist[13].p;
        const double a = 13.0 / 39.0;
        CHECK((mid - ((1.0 - a) * spec.start.p + a * spec.end.p)).norm() < 1e-15);
        // Motor strictly increases during closing.
        for (int k = 41; k < 120; ++k)
            CHECK(plan.motor[static_cast<std::size_t>(k)] >
                  plan.motor[static_cast<std::size_t>(k - 1)]);
    }

    TEST_CASE("input validation") {
        const HandDescription hand = graspkde::make_default_hand();
        PointCloud cloud;
        cloud.points.emplace_back(0.0, 0.0, 0.0);
        CHECK_THROWS_AS(close_against_cloud(hand, still_wrist(3), motor_ramp(2), cloud), DataError);
        CHECK_THROWS_AS(close_against_cloud(hand, still_wrist(1), {0.0}, cloud), DataError);
    }
}
