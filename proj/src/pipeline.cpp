#include "graspkde/pipeline.hpp"

#include <algorithm>
#include <utility>

#include "graspkde/collision.hpp"
#include "graspkde/contact_model.hpp"
#include "graspkde/errors.hpp"
#include "graspkde/object_model.hpp"
#include "graspkde/surface_features.hpp"

namespace graspkde {

TrainedModels run_train(const HandDescription& hand,
                        const std::vector<TrainingExample>& examples, const RunConfig& cfg,
                        Exec exec, std::vector<Eigen::MatrixXd>* norms_out) {
    if (norms_out) norms_out->clear();
    cfg.validate();
    if (examples.empty()) throw DataError("training needs at least one example");
    for (const TrainingExample& ex : examples) {
        if (ex.type.empty()) throw DataError("training example without a grasp type name");
        if (ex.trajectory.equilibrium().h_c.size() != hand.dof())
            throw DataError("example '" + ex.source_id +
                            "': trajectory does not match the hand");
    }

    const RandomStream master(cfg.seed);
    const Bandwidth bw(cfg.sigma_p, cfg.sigma_q, cfg.sigma_r);
    const ReceptiveFieldParams rf{cfg.lambda, cfg.delta};
    const int n_links = hand.num_links();

    // Grasp types in order of first appearance.
    std::vector<std::string> names;
    for (const TrainingExample& ex : examples)
        if (std::find(names.begin(), names.end(), ex.type) == names.end())
            names.push_back(ex.type);

    TrainedModels out{hand, {}, cfg};
    for (const std::string& name : names) {
        // models[link][example-within-type]
        std::vector<std::vector<ContactModel>> models(static_cast<std::size_t>(n_links));
        std::vector<Eigen::VectorXd> equilibria;
        std::vector<Trajectory> trajectories;

        for (std::size_t e = 0; e < examples.size(); ++e) {
            const TrainingExample& ex = examples[e];
            if (ex.type != name) continue;

            const SurfaceFeatureSet features =
                extract_features(ex.cloud, FeatureParams{cfg.k_nn}, exec);
            RandomStream om_rng = master.substream(e);
            const ObjectModel om = build_object_model(features, bw, cfg.max_model_particles,
                                                      om_rng, ex.source_id);

            const HandState& eq = ex.trajectory.equilibrium();
            const std::vector<Pose> link_poses = forward_kinematics(hand, eq.h_w, eq.h_c);
            for (int i = 0; i < n_links; ++i)
                models[static_cast<std::size_t>(i)].push_back(
                    learn_contact_model(om, hand.link(i).geometry, i,
                                        link_poses[static_cast<std::size_t>(i)], rf, bw));

            equilibria.push_back(eq.h_c);
            trajectories.push_back(ex.trajectory);
        }

        const std::size_t n_examples = trajectories.size();
        Eigen::MatrixXd norms(n_links, n_examples);
        for (int i = 0; i < n_links; ++i)
            for (std::size_t e = 0; e < n_examples; ++e)
                norms(i, static_cast<Eigen::Index>(e)) =
                    models[static_cast<std::size_t>(i)][e].norm;

        ContactSelection sel;
        try {
            sel = select_contacts(norms, Eigen::VectorXd::Constant(n_links, cfg.eta), cfg.zeta);
        } catch (const DegenerateError&) {
            throw DegenerateError("grasp type '" + name +
                                  "': no link ever entered its receptive field");
        }
        GraspTypeContacts contacts = mix_contact_models(models, sel);
        if (contacts.selected_links().empty())
            throw DegenerateError("grasp type '" + name + "': contact selection kept no link");
        if (norms_out) norms_out->push_back(norms);

        out.types.push_back(GraspTypeModel{name, std::move(contacts),
                                           build_config_model(equilibria, cfg.sigma_hc),
                                           std::move(trajectories)});
    }
    return out;
}

InferenceReport run_infer(const TrainedModels& models, const PointCloud& cloud,
                          const RunConfig& cfg, std::size_t top_n, Exec exec) {
    cfg.validate();
    if (models.types.empty()) throw DataError("inference needs at least one grasp type");

    const RandomStream master(cfg.seed);
    const Bandwidth bw(cfg.sigma_p, cfg.sigma_q, cfg.sigma_r);

    const SurfaceFeatureSet features = extract_features(cloud, FeatureParams{cfg.k_nn}, exec);
    RandomStream om_rng = master.substream(0);
    const ObjectModel om =
        build_object_model(features, bw, cfg.max_model_particles, om_rng, "query");
    const CollisionChecker collision(cloud, cfg.k_nn);

    InferenceReport report;
    std::vector<GraspTypeModel> active;
    std::vector<QuerySet> queries;
    std::string last_error;
    const RandomStream query_rng = master.substream(1);
    for (std::size_t t = 0; t < models.types.size(); ++t) {
        RandomStream type_rng = query_rng.substream(t);
        try {
            QuerySet qs = build_query_set(models.types[t], om, cfg, type_rng, exec);
            queries.push_back(std::move(qs));
            active.push_back(models.types[t]);
        } catch (const DegenerateError& err) {
            report.skipped_types.push_back(models.types[t].name);
            last_error = err.what();
        }
    }
    if (active.empty())
        throw DegenerateError("no grasp type transfers to this object (" + last_error + ")");

    std::vector<GraspCandidate> population =
        seed_population(active, queries, models.hand, cfg, master.substream(2));
    anneal(population, active, queries, models.hand, collision, cfg, exec,
           &report.checkpoint_best);
    rank_and_prune(population, cfg.workspace);

    const std::size_t keep =
        top_n == 0 ? population.size() : std::min(top_n, population.size());
    report.grasps.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        GraspCandidate& cand = population[i];
        GraspResult res;
        res.type = active[cand.type_index].name;
        res.state = std::move(cand.state);
        res.trajectory = std::move(cand.trajectory);
        res.log_c = cand.log_c;
        res.log_q = cand.log_q;
        res.log_coll = cand.log_coll;
        res.log_normalized = cand.log_normalized;
        report.grasps.push_back(std::move(res));
    }
    return report;
}

}  // namespace graspkde
