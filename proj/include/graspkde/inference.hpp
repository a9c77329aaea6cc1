#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "graspkde/collision.hpp"
#include "graspkde/config.hpp"
#include "graspkde/exec.hpp"
#include "graspkde/hand.hpp"
#include "graspkde/model.hpp"
#include "graspkde/query_density.hpp"
#include "graspkde/random.hpp"

namespace graspkde {

/// Query densities of one grasp type on one query object, in the order of
/// the type's selected links.
struct QuerySet {
    std::vector<QueryDensity> densities;
};

/// One density per selected link, computed on an independent substream per
/// link so the set is reproducible regardless of schedule. Propagates
/// DegenerateError from any link whose contact model has no curvature
/// overlap with the object.
QuerySet build_query_set(const GraspTypeModel& type, const ObjectModel& om,
                         const RunConfig& cfg, RandomStream& rng, Exec exec = Exec::Serial);

/// Collision-free part of the grasp log likelihood, split into its factors.
struct LikelihoodParts {
    double log_c = 0.0;
    double log_q = 0.0;
};

/// log C(h_c) and the sum over selected links of log Q_i at that link's
/// world pose under (h_w, h_c). One forward-kinematics pass per call.
LikelihoodParts grasp_log_likelihood(const HandState& state, const QuerySet& queries,
                                     const ConfigModel& config, const HandDescription& hand);

/// Full normalized log likelihood. The query factor is raised to
/// n_q_max / n_q so grasp types with different numbers of engaged links
/// compete on the same exponent count.
double log_normalized(double log_coll, const LikelihoodParts& parts, std::size_t n_q,
                      std::size_t n_q_max);

/// One annealed grasp hypothesis. The candidate owns its random stream, so a
/// population annealed in parallel is bit-identical to a serial pass. The
/// best_* fields snapshot the strongest checkpointed state seen so far;
/// checkpoints restore it whenever the current state has drifted below it.
struct GraspCandidate {
    int id = -1;
    std::size_t type_index = 0;
    std::size_t source_traj = 0;

    HandState state;
    Trajectory trajectory;
    double log_c = 0.0;
    double log_q = 0.0;
    /// Annealing objective: log_c + log_q.
    double log_full = 0.0;
    double log_coll = 0.0;
    double log_normalized = -std::numeric_limits<double>::infinity();

    HandState best_state;
    Trajectory best_trajectory;
    double best_log_c = 0.0;
    double best_log_q = 0.0;
    double best_log_full = 0.0;
    double best_log_coll = 0.0;
    double best_log_normalized = -std::numeric_limits<double>::infinity();

    RandomStream rng{0};
};

/// Draws an initial hand state for one grasp type: a training example picks
/// the links eligible to anchor the wrist (its in-contact links, or every
/// selected link when that example touched none of them), a link pose comes
/// from that link's query density, a configuration from the config model
/// (resampled until it satisfies the joint limits), and the motor value from
/// the example's equilibrium. Throws DegenerateError when 50 configuration
/// draws all land outside the limits.
HandState seed_grasp(const GraspTypeModel& type, const QuerySet& queries,
                     const HandDescription& hand, RandomStream& rng);

/// Softmax choice over training trajectories by closeness of their
/// equilibria to the candidate state:
///   d^2 = |dp|^2/sel_sigma_p^2 + angle^2/sel_sigma_q^2 + |dh_c|^2/sel_sigma_c^2,
/// logit = -d^2 / 2.
std::size_t select_reach_trajectory(const HandState& state,
                                    const std::vector<Trajectory>& trajectories,
                                    const RunConfig& cfg, RandomStream& rng);

/// Rigidly carries a training trajectory to a new equilibrium: every wrist
/// pose is premultiplied by target.h_w o eq.h_w^-1, configurations blend
/// linearly from unchanged to the full offset (clamped to the joint limits),
/// times and motor values copy over, and the final state is assigned the
/// target exactly.
Trajectory warp_trajectory(const Trajectory& traj, const HandState& target,
                           const HandDescription& hand);

/// cfg.population candidates cycling over the types, candidate j on
/// substream j of base. Each arrives seeded, scored, and with a warped
/// reach trajectory.
std::vector<GraspCandidate> seed_population(const std::vector<GraspTypeModel>& types,
                                            const std::vector<QuerySet>& queries,
                                            const HandDescription& hand, const RunConfig& cfg,
                                            const RandomStream& base);

/// Simulated annealing over the population: per step, every candidate makes
/// one Gaussian proposal (wrist position, wrist orientation via the
/// exponential map, clamped configuration) and accepts with probability
/// min(1, (L'/L)^(1/T)) on the collision-free likelihood, T sliding linearly
/// from sa_t1 to sa_tk. At each step in cfg.selection_steps the population
/// is checkpointed (trajectories re-warped, collision expert applied,
/// normalized likelihoods computed, each candidate restored to its best
/// checkpointed state if it has drifted below it) and cut to the cfg.retain
/// fraction; a final checkpoint without the cut ranks the survivors.
/// When checkpoint_best is given, the population's best normalized log
/// likelihood is appended after every checkpoint (selection steps in order,
/// then the final one). Throws DegenerateError when a checkpoint finds no
/// candidate with positive normalized likelihood.
void anneal(std::vector<GraspCandidate>& population, const std::vector<GraspTypeModel>& types,
            const std::vector<QuerySet>& queries, const HandDescription& hand,
            const CollisionChecker& collision, const RunConfig& cfg, Exec exec = Exec::Serial,
            std::vector<double>* checkpoint_best = nullptr);

/// Drops candidates whose reach trajectory leaves the workspace box
/// (xmin, xmax, ymin, ymax, zmin, zmax), then orders by normalized
/// likelihood, ties by id.
void rank_and_prune(std::vector<GraspCandidate>& population,
                    const std::optional<std::array<double, 6>>& workspace);

}  // namespace graspkde
