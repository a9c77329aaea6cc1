#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Core>

namespace graspkde {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seeded random source. Every sampler in the library takes one of these
/// explicitly; nothing draws from hidden global state. Substreams derived
/// from (seed, index) let parallel work items own independent streams while
/// staying reproducible: the same (seed, index) always yields the same
/// stream, so serial and parallel schedules produce identical results.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed)
        : seed_(seed), eng_(splitmix64(seed)) {}

    /// Independent stream derived from this stream's seed and an index.
    RandomStream substream(std::uint64_t index) const {
        return RandomStream(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1))));
    }

    std::uint64_t seed() const { return seed_; }

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
    }

    // Distribution objects are constructed per call so no generator state
    // hides outside the engine; a stream's output is a pure function of its
    // seed and the call sequence.
    double gauss() {
        return std::normal_distribution<double>(0.0, 1.0)(eng_);
    }

    Eigen::Vector2d gauss2() {
        const double a = gauss(), b = gauss();
        return {a, b};
    }

    Eigen::Vector3d gauss3() {
        const double a = gauss(), b = gauss(), c = gauss();
        return {a, b, c};
    }

    /// Index into a cumulative weight table (last entry = total).
    std::size_t categorical_from_cumulative(std::span<const double> cumulative) {
        const double u = uniform() * cumulative.back();
        std::size_t lo = 0, hi = cumulative.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace graspkde
