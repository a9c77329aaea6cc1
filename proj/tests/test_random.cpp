#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "graspkde/random.hpp"

using graspkde::RandomStream;

TEST_SUITE("random") {

    TEST_CASE("streams with the same seed replay the same values") {
        RandomStream a(7), b(7);
        for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
        for (int i = 0; i < 100; ++i) CHECK(a.gauss() == b.gauss());
    }

    TEST_CASE("substreams depend only on seed and index") {
        RandomStream root(99);
        RandomStream s1 = root.substream(3);
        root.uniform();  // consuming the parent must not affect substreams
        RandomStream s2 = root.substream(3);
        for (int i = 0; i < 50; ++i) CHECK(s1.uniform() == s2.uniform());

        RandomStream other = root.substream(4);
        int equal = 0;
        RandomStream s3 = root.substream(3);
        for (int i = 0; i < 50; ++i)
            if (s3.uniform() == other.uniform()) ++equal;
        CHECK(equal == 0);
    }

    TEST_CASE("uniform stays in the half-open unit interval") {
        RandomStream rng(5);
        for (int i = 0; i < 10000; ++i) {
            const double u = rng.uniform();
            CHECK(u >= 0.0);
            CHECK(u < 1.0);
        }
    }

    TEST_CASE("gauss moments are consistent with a standard normal") {
        RandomStream rng(6);
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rng.gauss();
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
        CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
    }

    TEST_CASE("categorical draws respect cumulative weights and skip zeros") {
        RandomStream rng(8);
        const std::array<double, 3> cumulative = {0.5, 0.5, 1.0};  // middle weight is zero
        std::array<int, 3> counts = {0, 0, 0};
        const int n = 20000;
        for (int i = 0; i < n; ++i) counts[rng.categorical_from_cumulative(cumulative)]++;
        CHECK(counts[1] == 0);
        CHECK(std::abs(counts[0] - n / 2) < 4.5 * std::sqrt(n * 0.25));
        CHECK(counts[0] + counts[2] == n);
    }

    TEST_CASE("categorical covers skewed weight tables") {
        RandomStream rng(9);
        const std::array<double, 4> cumulative = {0.001, 0.101, 0.102, 1.0};
        std::array<int, 4> counts = {0, 0, 0, 0};
        const int n = 100000;
        for (int i = 0; i < n; ++i) counts[rng.categorical_from_cumulative(cumulative)]++;
        const std::array<double, 4> probs = {0.001, 0.1, 0.001, 0.898};
        for (int j = 0; j < 4; ++j) {
            const double sd = std::sqrt(n * probs[j] * (1.0 - probs[j]));
            CHECK(std::abs(counts[j] - n * probs[j]) < 5.0 * sd + 5.0);
        }
    }
}
