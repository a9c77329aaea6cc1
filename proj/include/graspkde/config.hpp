#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "graspkde/exec.hpp"

namespace graspkde {

/// Every tunable in one place. JSON config files override any subset of the
/// defaults; unknown keys are rejected so typos cannot silently fall back to
/// a default.
struct RunConfig {
    // Feature extraction.
    int k_nn = 20;
    /// Object models are subsampled to at most this many particles; 0 keeps
    /// everything.
    std::size_t max_model_particles = 5000;

    // Kernel bandwidths (position m, orientation concentration, curvature).
    double sigma_p = 0.01;
    double sigma_q = 100.0;
    double sigma_r = 10.0;

    // Receptive field and contact selection.
    double lambda = 2500.0;
    double delta = 0.04;
    double eta = 0.5;
    double zeta = 0.5;

    // Equilibrium configuration mixture.
    double sigma_hc = 0.1;

    // Query densities.
    int k_query = 500;

    // Reach-trajectory selection distance scales (m, rad, rad).
    double sel_sigma_p = 0.05;
    double sel_sigma_q = 0.5;
    double sel_sigma_c = 0.5;

    // Simulated annealing.
    int sa_steps = 100;
    double sa_t1 = 1.0;
    double sa_tk = 0.01;
    double sa_prop_p = 0.005;
    double sa_prop_q = 0.05;
    double sa_prop_c = 0.05;
    int population = 1000;
    std::vector<int> selection_steps = {1, 50};
    double retain = 0.1;

    // Collision expert and closing generator.
    double beta = 500.0;
    double contact_threshold = 0.002;
    double joint_rate = 0.02;

    std::uint64_t seed = 0;
    /// Axis-aligned workspace box (lo_x, lo_y, lo_z, hi_x, hi_y, hi_z);
    /// unset means no reachability pruning.
    std::optional<std::array<double, 6>> workspace;
    bool parallel = true;

    Exec exec() const { return parallel ? Exec::OpenMP : Exec::Serial; }

    /// Throws DataError on out-of-range values.
    void validate() const;
};

/// Reads a JSON object whose keys mirror the field names. Missing keys keep
/// their defaults; unknown keys throw DataError.
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace graspkde
