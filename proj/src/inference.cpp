#include "graspkde/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graspkde/errors.hpp"
#include "graspkde/kernels.hpp"

namespace graspkde {

namespace {

std::size_t pick_uniform(RandomStream& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

Eigen::VectorXd clamp_to_limits(Eigen::VectorXd h_c, const JointLimits& lim) {
    for (Eigen::Index j = 0; j < h_c.size(); ++j)
        h_c[j] = std::clamp(h_c[j], lim.lo[j], lim.hi[j]);
    return h_c;
}

bool ranks_before(const GraspCandidate& a, const GraspCandidate& b) {
    if (a.log_normalized != b.log_normalized) return a.log_normalized > b.log_normalized;
    return a.id < b.id;
}

/// Re-warps, applies the collision expert, computes normalized likelihoods,
/// and restores any candidate that has drifted below its best checkpointed
/// state (so the population maximum never decreases between checkpoints).
/// Then sorts and, at selection steps, cuts to the retain fraction.
void checkpoint(std::vector<GraspCandidate>& pop, const std::vector<GraspTypeModel>& types,
                const std::vector<QuerySet>& queries, const HandDescription& hand,
                const CollisionChecker& collision, const RunConfig& cfg, std::size_t n_q_max,
                bool cut, Exec exec, std::vector<double>* best) {
    parallel_for(pop.size(), exec, [&](std::size_t idx) {
        GraspCandidate& cand = pop[idx];
        const GraspTypeModel& type = types[cand.type_index];
        cand.trajectory = warp_trajectory(type.trajectories[cand.source_traj], cand.state, hand);
        cand.log_coll = collision.log_expert(hand, cand.trajectory, cfg.beta);
        cand.log_normalized =
            log_normalized(cand.log_coll, LikelihoodParts{cand.log_c, cand.log_q},
                           queries[cand.type_index].densities.size(), n_q_max);
        if (cand.log_normalized < cand.best_log_normalized) {
            cand.state = cand.best_state;
            cand.trajectory = cand.best_trajectory;
            cand.log_c = cand.best_log_c;
            cand.log_q = cand.best_log_q;
            cand.log_full = cand.best_log_full;
            cand.log_coll = cand.best_log_coll;
            cand.log_normalized = cand.best_log_normalized;
        } else {
            cand.best_state = cand.state;
            cand.best_trajectory = cand.trajectory;
            cand.best_log_c = cand.log_c;
            cand.best_log_q = cand.log_q;
            cand.best_log_full = cand.log_full;
            cand.best_log_coll = cand.log_coll;
            cand.best_log_normalized = cand.log_normalized;
        }
    });
    std::sort(pop.begin(), pop.end(), ranks_before);
    if (pop.front().log_normalized == kNegInf)
        throw DegenerateError("annealing: no candidate has positive normalized likelihood");
    if (best != nullptr) best->push_back(pop.front().log_normalized);
    if (cut) pop.resize(std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.retain * static_cast<double>(pop.size()))));
}

}  // namespace

QuerySet build_query_set(const GraspTypeModel& type, const ObjectModel& om, const RunConfig& cfg,
                         RandomStream& rng, Exec exec) {
    const std::vector<int> links = type.contacts.selected_links();
    if (links.empty())
        throw DegenerateError("query set: grasp type '" + type.name + "' has no selected links");
    QuerySet out;
    out.densities.reserve(links.size());
    for (int link : links) {
        const auto& model = type.contacts.mixed[static_cast<std::size_t>(link)];
        if (!model.has_value() || model->empty())
            throw DataError("query set: selected link " + std::to_string(link) +
                            " carries no contact model");
        RandomStream sub = rng.substream(static_cast<std::uint64_t>(link));
        out.densities.push_back(
            compute_query_density(*model, om, cfg.k_query, cfg.sigma_p, cfg.sigma_q, sub, exec));
    }
    return out;
}

LikelihoodParts grasp_log_likelihood(const HandState& state, const QuerySet& queries,
                                     const ConfigModel& config, const HandDescription& hand) {
    const std::vector<Pose> poses = forward_kinematics(hand, state.h_w, state.h_c);
    LikelihoodParts parts;
    parts.log_c = config.log_eval(state.h_c);
    for (const QueryDensity& q : queries.densities) {
        if (q.link() < 0 || q.link() >= hand.num_links())
            throw DataError("query density refers to link " + std::to_string(q.link()) +
                            " of a " + std::to_string(hand.num_links()) + "-link hand");
        parts.log_q += q.log_eval(poses[static_cast<std::size_t>(q.link())]);
    }
    return parts;
}

double log_normalized(double log_coll, const LikelihoodParts& parts, std::size_t n_q,
                      std::size_t n_q_max) {
    if (n_q == 0) throw DataError("normalized likelihood needs at least one query density");
    return log_coll + parts.log_c +
           (static_cast<double>(n_q_max) / static_cast<double>(n_q)) * parts.log_q;
}

HandState seed_grasp(const GraspTypeModel& type, const QuerySet& queries,
                     const HandDescription& hand, RandomStream& rng) {
    if (type.trajectories.empty())
        throw DataError("seed: grasp type '" + type.name + "' has no training trajectories");
    if (queries.densities.empty()) throw DegenerateError("seed: empty query set");

    const std::size_t example = pick_uniform(rng, type.trajectories.size());

    const JointLimits lim = joint_limits(hand);
    Eigen::VectorXd h_c;
    bool inside = false;
    for (int attempt = 0; attempt < 50 && !inside; ++attempt) {
        h_c = type.config.sample(rng);
        inside = lim.contains(h_c);
    }
    if (!inside)
        throw DegenerateError(
            "seed: configuration model mass lies outside the joint limits of the hand");

    const auto& sel = type.contacts.selection;
    std::vector<std::size_t> anchors;
    for (std::size_t d = 0; d < queries.densities.size(); ++d) {
        const int link = queries.densities[d].link();
        if (link < sel.b.rows() && static_cast<Eigen::Index>(example) < sel.b.cols() &&
            sel.b(link, static_cast<Eigen::Index>(example)) == 1)
            anchors.push_back(d);
    }
    if (anchors.empty())
        for (std::size_t d = 0; d < queries.densities.size(); ++d) anchors.push_back(d);

    const QueryDensity& density = queries.densities[anchors[pick_uniform(rng, anchors.size())]];
    const Pose s = density.sample(rng);

    HandState state;
    state.h_w = compose(s, inverse(link_in_wrist(hand, density.link(), h_c)));
    state.h_c = std::move(h_c);
    state.h_m = type.trajectories[example].equilibrium().h_m;
    return state;
}

std::size_t select_reach_trajectory(const HandState& state,
                                    const std::vector<Trajectory>& trajectories,
                                    const RunConfig& cfg, RandomStream& rng) {
    if (trajectories.empty()) throw DataError("trajectory selection: nothing to select from");
    std::vector<double> logits(trajectories.size());
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const HandState& eq = trajectories[i].equilibrium();
        if (eq.h_c.size() != state.h_c.size())
            throw DataError("trajectory selection: configuration size mismatch");
        const double angle = quat_angle(state.h_w.q, eq.h_w.q);
        const double d2 =
            (state.h_w.p - eq.h_w.p).squaredNorm() / (cfg.sel_sigma_p * cfg.sel_sigma_p) +
            angle * angle / (cfg.sel_sigma_q * cfg.sel_sigma_q) +
            (state.h_c - eq.h_c).squaredNorm() / (cfg.sel_sigma_c * cfg.sel_sigma_c);
        logits[i] = -0.5 * d2;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> cumulative(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        total += std::exp(logits[i] - top);
        cumulative[i] = total;
    }
    return rng.categorical_from_cumulative(cumulative);
}

Trajectory warp_trajectory(const Trajectory& traj, const HandState& target,
                           const HandDescription& hand) {
    const HandState& eq = traj.equilibrium();
    if (eq.h_c.size() != hand.dof() || target.h_c.size() != hand.dof())
        throw DataError("warp: configuration size does not match the hand");
    const Pose shift = compose(target.h_w, inverse(eq.h_w));
    const Eigen::VectorXd offset = target.h_c - eq.h_c;
    const JointLimits lim = joint_limits(hand);

    Trajectory out;
    const std::size_t n = traj.points.size();
    out.points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const TrajectoryPoint& src = traj.points[k];
        const double alpha =
            n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 1.0;
        TrajectoryPoint pt;
        pt.t = src.t;
        pt.state.h_w = compose(shift, src.state.h_w);
        pt.state.h_c = clamp_to_limits(src.state.h_c + alpha * offset, lim);
        pt.state.h_m = src.state.h_m;
        out.points.push_back(std::move(pt));
    }
    out.points.back().state = target;
    return out;
}

std::vector<GraspCandidate> seed_population(const std::vector<GraspTypeModel>& types,
                                            const std::vector<QuerySet>& queries,
                                            const HandDescription& hand, const RunConfig& cfg,
                                            const RandomStream& base) {
    if (types.empty()) throw DataError("seeding: no grasp types");
    if (types.size() != queries.size())
        throw DataError("seeding: query sets do not match grasp types");

    std::vector<GraspCandidate> pop;
    pop.reserve(static_cast<std::size_t>(cfg.population));
    for (int j = 0; j < cfg.population; ++j) {
        GraspCandidate cand;
        cand.id = j;
        cand.type_index = static_cast<std::size_t>(j) % types.size();
        cand.rng = base.substream(static_cast<std::uint64_t>(j));
        const GraspTypeModel& type = types[cand.type_index];
        const QuerySet& qs = queries[cand.type_index];

        cand.state = seed_grasp(type, qs, hand, cand.rng);
        cand.source_traj = select_reach_trajectory(cand.state, type.trajectories, cfg, cand.rng);
        cand.trajectory = warp_trajectory(type.trajectories[cand.source_traj], cand.state, hand);

        const LikelihoodParts parts = grasp_log_likelihood(cand.state, qs, type.config, hand);
        cand.log_c = parts.log_c;
        cand.log_q = parts.log_q;
        cand.log_full = parts.log_c + parts.log_q;
        pop.push_back(std::move(cand));
    }
    return pop;
}

void anneal(std::vector<GraspCandidate>& population, const std::vector<GraspTypeModel>& types,
            const std::vector<QuerySet>& queries, const HandDescription& hand,
            const CollisionChecker& collision, const RunConfig& cfg, Exec exec,
            std::vector<double>* checkpoint_best) {
    if (population.empty()) throw DegenerateError("annealing: empty population");
    if (types.size() != queries.size())
        throw DataError("annealing: query sets do not match grasp types");
    for (const GraspCandidate& cand : population)
        if (cand.type_index >= types.size() ||
            cand.source_traj >= types[cand.type_index].trajectories.size())
            throw DataError("annealing: candidate refers to an unknown grasp type or trajectory");

    std::size_t n_q_max = 0;
    for (const QuerySet& qs : queries) n_q_max = std::max(n_q_max, qs.densities.size());

    const JointLimits lim = joint_limits(hand);
    const int steps = cfg.sa_steps;
    for (int k = 1; k <= steps; ++k) {
        const double temp =
            steps > 1 ? cfg.sa_t1 + (cfg.sa_tk - cfg.sa_t1) * static_cast<double>(k - 1) /
                                        static_cast<double>(steps - 1)
                      : cfg.sa_t1;
        parallel_for(population.size(), exec, [&](std::size_t idx) {
            GraspCandidate& cand = population[idx];
            const GraspTypeModel& type = types[cand.type_index];

            const Eigen::Vector3d dp = cfg.sa_prop_p * cand.rng.gauss3();
            const Eigen::Vector3d dw = cfg.sa_prop_q * cand.rng.gauss3();
            Eigen::VectorXd h_c = cand.state.h_c;
            for (Eigen::Index j = 0; j < h_c.size(); ++j)
                h_c[j] = std::clamp(h_c[j] + cfg.sa_prop_c * cand.rng.gauss(),
                                    lim.lo[j], lim.hi[j]);
            const double u = cand.rng.uniform();

            HandState prop;
            prop.h_w.p = cand.state.h_w.p + dp;
            prop.h_w.q = (quat_exp(dw) * cand.state.h_w.q).normalized();
            prop.h_c = std::move(h_c);
            prop.h_m = cand.state.h_m;

            const LikelihoodParts parts =
                grasp_log_likelihood(prop, queries[cand.type_index], type.config, hand);
            const double log_l = parts.log_c + parts.log_q;
            if (std::isnan(log_l)) return;

            const bool accept = cand.log_full == kNegInf
                                    ? log_l > kNegInf
                                    : std::log(u) < (log_l - cand.log_full) / temp;
            if (accept) {
                cand.state = std::move(prop);
                cand.log_c = parts.log_c;
                cand.log_q = parts.log_q;
                cand.log_full = log_l;
            }
        });
        if (std::find(cfg.selection_steps.begin(), cfg.selection_steps.end(), k) !=
            cfg.selection_steps.end())
            checkpoint(population, types, queries, hand, collision, cfg, n_q_max, true, exec,
                       checkpoint_best);
    }
    checkpoint(population, types, queries, hand, collision, cfg, n_q_max, false, exec,
               checkpoint_best);
}

void rank_and_prune(std::vector<GraspCandidate>& population,
                    const std::optional<std::array<double, 6>>& workspace) {
    if (workspace.has_value()) {
        const std::array<double, 6>& ws = *workspace;
        const auto leaves = [&ws](const GraspCandidate& cand) {
            for (const TrajectoryPoint& pt : cand.trajectory.points) {
                const Eigen::Vector3d& p = pt.state.h_w.p;
                if (p.x() < ws[0] || p.x() > ws[1] || p.y() < ws[2] || p.y() > ws[3] ||
                    p.z() < ws[4] || p.z() > ws[5])
                    return true;
            }
            return false;
        };
        population.erase(std::remove_if(population.begin(), population.end(), leaves),
                         population.end());
    }
    std::sort(population.begin(), population.end(), ranks_before);
}

}  // namespace graspkde
