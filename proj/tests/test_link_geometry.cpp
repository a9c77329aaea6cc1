#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "graspkde/errors.hpp"
#include "graspkde/link_geometry.hpp"
#include "graspkde/random.hpp"

using graspkde::DataError;
using graspkde::LinkGeometry;
using graspkde::Pose;
using graspkde::RandomStream;

namespace {

LinkGeometry capsule(double radius, double length) {
    return {LinkGeometry::Type::Capsule, {radius, length, 0.0}};
}

LinkGeometry box(double ex, double ey, double ez) {
    return {LinkGeometry::Type::Box, {ex, ey, ez}};
}

Pose random_pose(RandomStream& rng) {
    return Pose(0.3 * rng.gauss3(),
                Eigen::Quaterniond(rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss()));
}

}  // namespace

TEST_SUITE("link_geometry") {

    TEST_CASE("point on the surface maps to itself") {
        const LinkGeometry b = box(0.02, 0.01, 0.005);
        const Eigen::Vector3d on_face(0.01, 0.002, -0.001);
        CHECK((closest_surface_point(b, Pose{}, on_face) - on_face).norm() == 0.0);
        CHECK(signed_distance(b, Pose{}, on_face) == 0.0);

        const LinkGeometry c = capsule(0.008, 0.05);
        const Eigen::Vector3d on_side(0.008, 0.0, 0.02);
        CHECK((closest_surface_point(c, Pose{}, on_side) - on_side).norm() < 1e-15);
        CHECK(std::abs(signed_distance(c, Pose{}, on_side)) < 1e-15);
    }

    TEST_CASE("box face query from outside") {
        const LinkGeometry b = box(0.02, 0.01, 0.005);
        const Eigen::Vector3d p(0.05, 0.0, 0.0);
        const Eigen::Vector3d cp = closest_surface_point(b, Pose{}, p);
        CHECK((cp - Eigen::Vector3d(0.01, 0.0, 0.0)).norm() < 1e-15);
        CHECK(signed_distance(b, Pose{}, p) == doctest::Approx(0.04).epsilon(1e-12));
    }

    TEST_CASE("box corner region") {
        const LinkGeometry b = box(0.02, 0.01, 0.005);
        const Eigen::Vector3d p(0.02, 0.015, 0.01);
        const Eigen::Vector3d corner(0.01, 0.005, 0.0025);
        CHECK((closest_surface_point(b, Pose{}, p) - corner).norm() < 1e-15);
        CHECK(signed_distance(b, Pose{}, p) == doctest::Approx((p - corner).norm()).epsilon(1e-12));
    }

    TEST_CASE("box interior snaps to the nearest face") {
        const LinkGeometry b = box(0.02, 0.01, 0.005);
        const Eigen::Vector3d p(0.004, 0.0, 0.0);
        const Eigen::Vector3d cp = closest_surface_point(b, Pose{}, p);
        CHECK((cp - Eigen::Vector3d(0.004, 0.0, 0.0025)).norm() < 1e-15);
        CHECK(signed_distance(b, Pose{}, p) == doctest::Approx(-0.0025).epsilon(1e-12));
    }

    TEST_CASE("capsule axis query reports radius distance deterministically") {
        const LinkGeometry c = capsule(0.008, 0.05);
        const Eigen::Vector3d p(0.0, 0.0, 0.02);
        CHECK(signed_distance(c, Pose{}, p) == doctest::Approx(-0.008).epsilon(1e-12));
        const Eigen::Vector3d cp = closest_surface_point(c, Pose{}, p);
        CHECK((cp - p).norm() == doctest::Approx(0.008).epsilon(1e-12));
        CHECK(std::abs(signed_distance(c, Pose{}, cp)) < 1e-15);
    }

    TEST_CASE("capsule end cap and side") {
        const LinkGeometry c = capsule(0.008, 0.05);

        const Eigen::Vector3d above(0.0, 0.0, 0.05 + 0.008 + 0.03);
        CHECK(signed_distance(c, Pose{}, above) == doctest::Approx(0.03).epsilon(1e-12));
        CHECK((closest_surface_point(c, Pose{}, above) - Eigen::Vector3d(0.0, 0.0, 0.058)).norm() <
              1e-15);

        const Eigen::Vector3d beside(0.008 + 0.02, 0.0, 0.03);
        CHECK(signed_distance(c, Pose{}, beside) == doctest::Approx(0.02).epsilon(1e-12));
        CHECK((closest_surface_point(c, Pose{}, beside) - Eigen::Vector3d(0.008, 0.0, 0.03)).norm() <
              1e-15);

        // Below the base the segment starts at the origin, not at -length/2.
        const Eigen::Vector3d below(0.0, 0.006, -0.01);
        const double want = Eigen::Vector2d(0.006, 0.01).norm() - 0.008;
        CHECK(signed_distance(c, Pose{}, below) == doctest::Approx(want).epsilon(1e-12));
    }

    TEST_CASE("queries are rigid-equivariant") {
        RandomStream rng(401);
        const LinkGeometry shapes[] = {capsule(0.008, 0.05), box(0.02, 0.01, 0.005)};
        for (const LinkGeometry& geom : shapes) {
            for (int i = 0; i < 200; ++i) {
                const Pose T = random_pose(rng);
                const Eigen::Vector3d p = 0.05 * rng.gauss3();
                const double sd0 = signed_distance(geom, Pose{}, p);
                const Eigen::Vector3d cp0 = closest_surface_point(geom, Pose{}, p);
                const Eigen::Vector3d pw = transform_point(T, p);
                CHECK(std::abs(signed_distance(geom, T, pw) - sd0) < 1e-12);
                CHECK((closest_surface_point(geom, T, pw) - transform_point(T, cp0)).norm() < 1e-12);
            }
        }
    }

    TEST_CASE("closest point always lands on the surface and matches the distance") {
        RandomStream rng(402);
        const LinkGeometry shapes[] = {capsule(0.01, 0.04), box(0.03, 0.02, 0.01)};
        for (const LinkGeometry& geom : shapes) {
            for (int i = 0; i < 500; ++i) {
                const Eigen::Vector3d p = 0.04 * rng.gauss3();
                const double sd = signed_distance(geom, Pose{}, p);
                const Eigen::Vector3d cp = closest_surface_point(geom, Pose{}, p);
                CHECK(std::abs(signed_distance(geom, Pose{}, cp)) < 1e-12);
                CHECK((p - cp).norm() == doctest::Approx(std::abs(sd)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("bounding sphere contains the whole surface") {
        RandomStream rng(403);
        const LinkGeometry shapes[] = {capsule(0.01, 0.04), box(0.03, 0.02, 0.01)};
        for (const LinkGeometry& geom : shapes) {
            const double bound = bounding_radius(geom);
            for (int i = 0; i < 500; ++i) {
                const Eigen::Vector3d cp =
                    closest_surface_point(geom, Pose{}, 0.2 * rng.gauss3());
                CHECK(cp.norm() <= bound + 1e-12);
            }
        }
        CHECK(bounding_radius(capsule(0.01, 0.04)) == doctest::Approx(0.05));
        CHECK(bounding_radius(box(0.03, 0.02, 0.01)) ==
              doctest::Approx(0.5 * std::sqrt(0.0009 + 0.0004 + 0.0001)));
    }

    TEST_CASE("centroid sits mid-segment for capsules, at the origin for boxes") {
        CHECK((centroid(capsule(0.01, 0.04)) - Eigen::Vector3d(0.0, 0.0, 0.02)).norm() == 0.0);
        CHECK(centroid(box(0.03, 0.02, 0.01)).norm() == 0.0);
    }

    TEST_CASE("invalid dimensions are rejected") {
        CHECK_THROWS_AS(validate(capsule(0.0, 0.05)), DataError);
        CHECK_THROWS_AS(validate(capsule(0.01, -0.1)), DataError);
        CHECK_THROWS_AS(validate(box(0.02, 0.0, 0.005)), DataError);
        CHECK_NOTHROW(validate(capsule(0.01, 0.05)));
        CHECK_NOTHROW(validate(box(0.02, 0.01, 0.005)));
    }
}
