#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "graspkde/errors.hpp"
#include "graspkde/object_model.hpp"
#include "graspkde/random.hpp"

using graspkde::Bandwidth;
using graspkde::DegenerateError;
using graspkde::Feature;
using graspkde::ObjectModel;
using graspkde::Pose;
using graspkde::RandomStream;
using graspkde::SurfaceFeatureSet;

namespace {

SurfaceFeatureSet random_features(std::size_t n, RandomStream& rng) {
    SurfaceFeatureSet set;
    for (std::size_t i = 0; i < n; ++i) {
        const Pose v(0.1 * rng.gauss3(),
                     Eigen::Quaterniond(rng.gauss(), rng.gauss(), rng.gauss(), rng.gauss()));
        set.features.emplace_back(v, Eigen::Vector2d(20.0 + rng.gauss(), 5.0 + rng.gauss()));
    }
    return set;
}

}  // namespace

TEST_SUITE("object_model") {

    TEST_CASE("single feature carries weight one") {
        SurfaceFeatureSet set;
        set.features.emplace_back(Pose{}, Eigen::Vector2d(25.0, 25.0));
        const ObjectModel om = build_object_model(set, Bandwidth(0.01, 100.0, 5.0), "one");
        REQUIRE(om.density.size() == 1);
        CHECK(om.density.weights()[0] == 1.0);
        CHECK(om.source_id == "one");
    }

    TEST_CASE("weights are uniform at 1/K") {
        RandomStream rng(301);
        const SurfaceFeatureSet set = random_features(77, rng);
        const ObjectModel om = build_object_model(set, Bandwidth(0.01, 100.0, 5.0));
        REQUIRE(om.density.size() == 77);
        for (double w : om.density.weights()) CHECK(std::abs(w - 1.0 / 77.0) < 1e-12);
    }

    TEST_CASE("density at a training feature dominates a far-off pose") {
        SurfaceFeatureSet set;
        const Pose v(Eigen::Vector3d(0.05, -0.02, 0.3), Eigen::Quaterniond(0.6, 0.4, -0.1, 0.2));
        set.features.emplace_back(v, Eigen::Vector2d(12.0, 3.0));
        const double sigma_p = 0.01;
        const ObjectModel om = build_object_model(set, Bandwidth(sigma_p, 50.0, 5.0));

        const Feature at_particle = set.features[0];
        Feature far = at_particle;
        far.v.p += Eigen::Vector3d(10.0 * sigma_p, 0.0, 0.0);
        CHECK(om.density.log_eval(at_particle) > om.density.log_eval(far));
    }

    TEST_CASE("curvature marginal matches the smoothed empirical histogram") {
        RandomStream rng(302);
        const SurfaceFeatureSet set = random_features(40, rng);
        const double sigma_r = 1.5;
        const ObjectModel om = build_object_model(set, Bandwidth(0.01, 100.0, sigma_r));

        // Independent mixture-of-Gaussians sum over a grid of curvature pairs.
        for (double r1 = 16.0; r1 <= 24.0; r1 += 2.0) {
            for (double r2 = 2.0; r2 <= 8.0; r2 += 2.0) {
                const Eigen::Vector2d r(r1, r2);
                double want = 0.0;
                for (const Feature& f : set.features) {
                    const double d2 = (r - f.r).squaredNorm();
                    want += std::exp(-0.5 * d2 / (sigma_r * sigma_r)) /
                            (2.0 * M_PI * sigma_r * sigma_r) / 40.0;
                }
                CHECK(std::abs(om.density.marginal_r(r) - want) < 1e-3);
            }
        }
    }

    TEST_CASE("empty feature set is rejected") {
        CHECK_THROWS_AS(build_object_model(SurfaceFeatureSet{}, Bandwidth(0.01, 100.0, 5.0)),
                        DegenerateError);
    }

    TEST_CASE("subsampling caps the particle count deterministically") {
        RandomStream rng(303);
        const SurfaceFeatureSet set = random_features(200, rng);

        RandomStream sub_a(7), sub_b(7);
        const ObjectModel a = build_object_model(set, Bandwidth(0.01, 100.0, 5.0), 50, sub_a);
        const ObjectModel b = build_object_model(set, Bandwidth(0.01, 100.0, 5.0), 50, sub_b);
        REQUIRE(a.density.size() == 50);
        for (double w : a.density.weights()) CHECK(std::abs(w - 1.0 / 50.0) < 1e-12);

        // Same seed, same subset; every kept particle is a member of the
        // original set and cloud order is preserved.
        std::size_t cursor = 0;
        for (std::size_t j = 0; j < 50; ++j) {
            CHECK(a.density.particles()[j].v.p == b.density.particles()[j].v.p);
            while (cursor < set.features.size() &&
                   set.features[cursor].v.p != a.density.particles()[j].v.p)
                ++cursor;
            REQUIRE(cursor < set.features.size());
            ++cursor;
        }
    }

    TEST_CASE("cap at or above the feature count keeps everything") {
        RandomStream rng(304);
        const SurfaceFeatureSet set = random_features(30, rng);
        RandomStream sub(9);
        const ObjectModel capped = build_object_model(set, Bandwidth(0.01, 100.0, 5.0), 30, sub);
        const ObjectModel plain = build_object_model(set, Bandwidth(0.01, 100.0, 5.0));
        REQUIRE(capped.density.size() == 30);
        for (std::size_t j = 0; j < 30; ++j)
            CHECK(capped.density.particles()[j].v.p == plain.density.particles()[j].v.p);

        RandomStream sub2(9);
        const ObjectModel uncapped = build_object_model(set, Bandwidth(0.01, 100.0, 5.0), 0, sub2);
        CHECK(uncapped.density.size() == 30);
    }
}
