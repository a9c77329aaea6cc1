#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "graspkde/collision.hpp"
#include "graspkde/errors.hpp"

using graspkde::CollisionChecker;
using graspkde::DataError;
using graspkde::HandDescription;
using graspkde::HandLink;
using graspkde::LinkGeometry;
using graspkde::PointCloud;
using graspkde::Pose;
using graspkde::Trajectory;
using graspkde::TrajectoryPoint;

namespace {

// Single-view patch of the z = 0 plane seen from above; estimated normals
// come out as +z.
PointCloud plane_cloud(int n = 31, double spacing = 0.002) {
    PointCloud cloud;
    const double half = 0.5 * spacing * (n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cloud.points.emplace_back(spacing * i - half, spacing * j - half, 0.0);
    cloud.viewpoint = Eigen::Vector3d(0.0, 0.0, 1.0);
    return cloud;
}

Pose at_height(double z) { return Pose(Eigen::Vector3d(0.0, 0.0, z), Eigen::Quaterniond::Identity()); }

const LinkGeometry kPalm{LinkGeometry::Type::Box, {0.03, 0.03, 0.01}};

HandDescription palm_only_hand() {
    HandLink palm;
    palm.name = "palm";
    palm.geometry = kPalm;
    return HandDescription({palm}, Eigen::VectorXd(0));
}

Trajectory wrist_path(const std::vector<double>& heights) {
    Trajectory traj;
    for (std::size_t k = 0; k < heights.size(); ++k) {
        TrajectoryPoint pt;
        pt.t = static_cast<double>(k);
        pt.state.h_w = at_height(heights[k]);
        pt.state.h_c = Eigen::VectorXd(0);
        pt.state.h_m = 1.0;
        traj.points.push_back(pt);
    }
    return traj;
}

}  // namespace

TEST_SUITE("collision") {

    TEST_CASE("a link above the surface is free") {
        const CollisionChecker checker(plane_cloud());
        CHECK(checker.penetration_depth(kPalm, at_height(0.02)) == 0.0);
        CHECK(checker.penetration_depth(kPalm, at_height(0.4)) == 0.0);
    }

    TEST_CASE("a shallow dip measures the deepest interior point") {
        const CollisionChecker checker(plane_cloud());
        // Box spans z in [-0.001, 0.009]; the grid points under the centre sit
        // 1 mm above the bottom face and that face is the nearest one.
        CHECK(checker.penetration_depth(kPalm, at_height(0.004)) ==
              doctest::Approx(0.001).epsilon(1e-9));
        CHECK(checker.penetration_depth(kPalm, at_height(0.002)) ==
              doctest::Approx(0.003).epsilon(1e-9));
    }

    TEST_CASE("deeper dips measure deeper") {
        const CollisionChecker checker(plane_cloud());
        double last = -1.0;
        for (const double z : {0.0045, 0.004, 0.003, 0.002, 0.001}) {
            const double depth = checker.penetration_depth(kPalm, at_height(z));
            CHECK(depth > last);
            last = depth;
        }
    }

    TEST_CASE("a link wholly behind the surface measures its distance to it") {
        const CollisionChecker checker(plane_cloud());
        // Box spans z in [-0.025, -0.015]: no cloud point is inside, but the
        // displacement from the surface points against the +z normals.
        CHECK(checker.penetration_depth(kPalm, at_height(-0.02)) ==
              doctest::Approx(0.015).epsilon(1e-9));
    }

    TEST_CASE("capsules penetrate through their radius") {
        const CollisionChecker checker(plane_cloud());
        const LinkGeometry finger{LinkGeometry::Type::Capsule, {0.008, 0.05, 0.0}};
        // Axis along +x, hovering: clear.
        const Eigen::Quaterniond axis_to_x(Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitY()));
        const Pose hover(Eigen::Vector3d(-0.025, 0.0, 0.02), axis_to_x);
        CHECK(checker.penetration_depth(finger, hover) == 0.0);
        // Same axis at z = 0.005: the tube reaches 3 mm below the plane.
        const Pose dipped(Eigen::Vector3d(-0.025, 0.0, 0.005), axis_to_x);
        CHECK(checker.penetration_depth(finger, dipped) == doctest::Approx(0.003).epsilon(1e-9));
    }

    TEST_CASE("the expert scores the worst state of a trajectory") {
        const CollisionChecker checker(plane_cloud());
        const HandDescription hand = palm_only_hand();

        const Trajectory clear = wrist_path({0.2, 0.1, 0.05});
        CHECK(checker.max_penetration(hand, clear) == 0.0);
        CHECK(checker.log_expert(hand, clear, 500.0) == 0.0);

        const Trajectory dipping = wrist_path({0.05, -0.02, 0.004});
        CHECK(checker.max_penetration(hand, dipping) == doctest::Approx(0.015).epsilon(1e-9));
        CHECK(checker.log_expert(hand, dipping, 500.0) == doctest::Approx(-7.5).epsilon(1e-9));
        CHECK(std::exp(checker.log_expert(hand, dipping, 500.0)) ==
              doctest::Approx(std::exp(-7.5)).epsilon(1e-9));
        CHECK(checker.log_expert(hand, dipping, 0.0) == 0.0);
    }

    TEST_CASE("sparse clouds fall back to viewpoint-facing normals") {
        PointCloud sparse;
        for (int i = 0; i < 10; ++i)
            sparse.points.emplace_back(0.004 * i - 0.018, 0.0, 0.0);
        sparse.viewpoint = Eigen::Vector3d(0.0, 0.0, 1.0);
        const CollisionChecker checker(sparse);
        CHECK(checker.penetration_depth(kPalm, at_height(-0.02)) > 0.01);
        CHECK(checker.penetration_depth(kPalm, at_height(0.05)) == 0.0);
    }

    TEST_CASE("an empty cloud is rejected") {
        CHECK_THROWS_AS(CollisionChecker(PointCloud{}), DataError);
    }
}
