#include "graspkde/query_density.hpp"

#include <cmath>

#include "graspkde/density.hpp"
#include "graspkde/errors.hpp"

namespace graspkde {

QueryDensity::QueryDensity(std::vector<Pose> kernels, std::vector<double> weights, double sigma_p,
                           double sigma_q, int link)
    : kernels_(std::move(kernels)), weights_(std::move(weights)), sigma_p_(sigma_p),
      sigma_q_(sigma_q), log_c4_(log_c4(sigma_q)), link_(link) {
    if (kernels_.empty()) throw DataError("QueryDensity: needs at least one kernel");
    if (kernels_.size() != weights_.size())
        throw DataError("QueryDensity: kernel/weight count mismatch");
    if (!(sigma_p_ > 0.0) || !(sigma_q_ > 0.0))
        throw DataError("QueryDensity: bandwidths must be positive");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw DataError("QueryDensity: weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw DegenerateError("QueryDensity: all weights are zero");
    cumulative_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        weights_[j] /= total;
        acc += weights_[j];
        cumulative_[j] = acc;
    }
}

double QueryDensity::log_eval(const Pose& s) const {
    std::vector<double> logs(kernels_.size());
    for (std::size_t j = 0; j < kernels_.size(); ++j) {
        logs[j] = weights_[j] > 0.0
                      ? std::log(weights_[j]) +
                            log_pose_kernel_given_c4(s, kernels_[j], sigma_p_, sigma_q_, log_c4_)
                      : kNegInf;
    }
    return log_sum_exp(logs);
}

double QueryDensity::eval(const Pose& s) const { return std::exp(log_eval(s)); }

Pose QueryDensity::sample(RandomStream& rng) const {
    const std::size_t j = rng.categorical_from_cumulative(cumulative_);
    Pose out;
    out.p = kernels_[j].p + sigma_p_ * rng.gauss3();
    out.q = sample_theta(kernels_[j].q, sigma_q_, rng);
    return out;
}

QueryDensity compute_query_density(const ContactModel& cm, const ObjectModel& om, int k_q,
                                   double sigma_p, double sigma_q, RandomStream& rng, Exec exec) {
    if (cm.empty()) throw DegenerateError("compute_query_density: empty contact model");
    if (k_q < 1) throw DataError("compute_query_density: k_q must be at least 1");

    const Density& contact = *cm.density;
    std::vector<Pose> kernels(static_cast<std::size_t>(k_q));
    std::vector<double> weights(static_cast<std::size_t>(k_q), 0.0);

    parallel_for(static_cast<std::size_t>(k_q), exec, [&](std::size_t j) {
        RandomStream sub = rng.substream(j);
        const Feature f = om.density.sample(sub);
        const double log_marg = contact.log_marginal_r(f.r);
        if (log_marg < Density::kMinLogMarginal) {
            kernels[j] = f.v;
            return;
        }
        const std::vector<double> cond = contact.conditional_weights(f.r);
        const Pose u = contact.sample_pose_conditioned(cond, sub);
        kernels[j] = compose(f.v, u);
        weights[j] = std::exp(log_marg);
    });

    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
        throw DegenerateError(
            "compute_query_density: no curvature overlap between object and contact model");
    return QueryDensity(std::move(kernels), std::move(weights), sigma_p, sigma_q, cm.link);
}

}  // namespace graspkde
