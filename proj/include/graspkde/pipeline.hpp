#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "graspkde/cloud.hpp"
#include "graspkde/config.hpp"
#include "graspkde/exec.hpp"
#include "graspkde/hand.hpp"
#include "graspkde/inference.hpp"
#include "graspkde/model.hpp"

namespace graspkde {

/// One demonstrated grasp: a single-view cloud of the training object and the
/// reach-to-grasp trajectory that ends in the equilibrium state.
struct TrainingExample {
    PointCloud cloud;
    Trajectory trajectory;
    std::string type;
    std::string source_id;
};

/// Learns one model per grasp type named in the examples (order of first
/// appearance). Per example: surface features, object model, contact model
/// of every link at the equilibrium. Per type: contact selection over the
/// norms matrix, per-link mixtures, and the equilibrium configuration
/// mixture. Throws DegenerateError when a grasp type ends up with no
/// selected link and DataError on inconsistent inputs. When norms_out is
/// given it receives one links x examples norm matrix per grasp type, in
/// the same order as the returned types.
TrainedModels run_train(const HandDescription& hand,
                        const std::vector<TrainingExample>& examples, const RunConfig& cfg,
                        Exec exec = Exec::Serial,
                        std::vector<Eigen::MatrixXd>* norms_out = nullptr);

/// One ranked grasp on the query object.
struct GraspResult {
    std::string type;
    HandState state;
    Trajectory trajectory;
    double log_c = 0.0;
    double log_q = 0.0;
    double log_coll = 0.0;
    double log_normalized = 0.0;
};

struct InferenceReport {
    /// Best first; at most top_n entries (all survivors when top_n is 0).
    std::vector<GraspResult> grasps;
    /// Population-best normalized log likelihood at every checkpoint.
    std::vector<double> checkpoint_best;
    /// Grasp types whose query densities could not be built on this object.
    std::vector<std::string> skipped_types;
};

/// Transfers the learned models to a query cloud: object model, query
/// densities per grasp type (types without curvature overlap are skipped;
/// if every type is, DegenerateError), seeded population, annealing,
/// workspace pruning, ranking. Deterministic in cfg.seed for a fixed exec
/// schedule-independent layout: object model, query sets, and every
/// candidate draw from their own substreams.
InferenceReport run_infer(const TrainedModels& models, const PointCloud& cloud,
                          const RunConfig& cfg, std::size_t top_n, Exec exec = Exec::Serial);

}  // namespace graspkde
