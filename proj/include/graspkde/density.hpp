#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "graspkde/errors.hpp"
#include "graspkde/kernels.hpp"
#include "graspkde/random.hpp"

namespace graspkde {

/// Numerically stable log(sum(exp(logs))).
inline double log_sum_exp(std::span<const double> logs) {
    double m = kNegInf;
    for (double v : logs) m = std::max(m, v);
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double v : logs) acc += std::exp(v - m);
    return m + std::log(acc);
}

/// Weighted particle set over feature space (pose x curvature) with a shared
/// per-axis bandwidth. Immutable once built; concurrent read-only evaluation
/// from multiple threads is safe. All products are accumulated in log space
/// and exponentiated only on return.
class Density {
public:
    Density(std::vector<Feature> particles, std::vector<double> weights, const Bandwidth& bw)
        : particles_(std::move(particles)), weights_(std::move(weights)), bw_(bw), log_c4_(log_c4(bw.sigma_q)) {
        if (particles_.empty()) throw std::invalid_argument("Density: needs at least one particle");
        if (particles_.size() != weights_.size())
            throw std::invalid_argument("Density: particle/weight count mismatch");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) throw std::invalid_argument("Density: weights must be non-negative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("Density: weights must sum to 1");
        cumulative_.resize(weights_.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            weights_[j] /= total;
            acc += weights_[j];
            cumulative_[j] = acc;
        }
    }

    /// Builds from weights that are already normalised, keeping their bit
    /// patterns untouched so a serialised density reloads byte-identically.
    static Density from_normalized(std::vector<Feature> particles, std::vector<double> weights,
                                   const Bandwidth& bw) {
        Density d(std::move(particles), std::move(weights), bw, NormalizedTag{});
        return d;
    }

    std::size_t size() const { return particles_.size(); }
    const std::vector<Feature>& particles() const { return particles_; }
    const std::vector<double>& weights() const { return weights_; }
    const Bandwidth& bandwidth() const { return bw_; }

    double log_eval(const Feature& x) const {
        std::vector<double> logs(particles_.size());
        for (std::size_t j = 0; j < particles_.size(); ++j)
            logs[j] = log_weight(j) + log_kernel_given_c4(x, particles_[j], bw_, log_c4_);
        return log_sum_exp(logs);
    }

    double eval(const Feature& x) const { return std::exp(log_eval(x)); }

    /// Curvature marginal: the pose factors integrate out, leaving the
    /// weighted sum of N2 kernels.
    double log_marginal_r(const Eigen::Vector2d& r) const {
        std::vector<double> logs(particles_.size());
        for (std::size_t j = 0; j < particles_.size(); ++j)
            logs[j] = log_weight(j) + log_gauss2(r, particles_[j].r, bw_.sigma_r);
        return log_sum_exp(logs);
    }

    double marginal_r(const Eigen::Vector2d& r) const { return std::exp(log_marginal_r(r)); }

    /// Particle weights of the pose density conditioned on curvature r.
    /// Throws DegenerateError when the curvature marginal underflows to zero
    /// in linear space.
    std::vector<double> conditional_weights(const Eigen::Vector2d& r) const {
        std::vector<double> logs(particles_.size());
        for (std::size_t j = 0; j < particles_.size(); ++j)
            logs[j] = log_weight(j) + log_gauss2(r, particles_[j].r, bw_.sigma_r);
        const double log_total = log_sum_exp(logs);
        if (log_total < kMinLogMarginal)
            throw DegenerateError("conditional_weights: curvature marginal underflows to zero");
        std::vector<double> out(particles_.size());
        for (std::size_t j = 0; j < particles_.size(); ++j)
            out[j] = std::exp(logs[j] - log_total);
        return out;
    }

    /// Pose-only KDE evaluation under externally supplied weights (e.g. the
    /// output of conditional_weights).
    double log_eval_pose(std::span<const double> w, const Pose& pose) const {
        std::vector<double> logs(particles_.size());
        for (std::size_t j = 0; j < particles_.size(); ++j) {
            logs[j] = w[j] > 0.0 ? std::log(w[j]) + log_pose_kernel_given_c4(pose, particles_[j].v,
                                                                             bw_.sigma_p, bw_.sigma_q, log_c4_)
                                 : kNegInf;
        }
        return log_sum_exp(logs);
    }

    /// Draw a feature: particle index by weight, then position, curvature and
    /// orientation perturbed by the respective kernel factors.
    Feature sample(RandomStream& rng) const {
        const std::size_t j = rng.categorical_from_cumulative(cumulative_);
        return perturb(particles_[j], rng);
    }

    /// As sample(), but the particle index is drawn from caller-supplied
    /// weights (conditioning) and only the pose is perturbed.
    Pose sample_pose_conditioned(std::span<const double> w, RandomStream& rng) const {
        double total = 0.0;
        for (double x : w) total += x;
        double u = rng.uniform() * total;
        std::size_t j = 0;
        for (; j + 1 < w.size(); ++j) {
            if (u < w[j]) break;
            u -= w[j];
        }
        const Pose& base = particles_[j].v;
        Pose out;
        out.p = base.p + bw_.sigma_p * rng.gauss3();
        out.q = sample_theta(base.q, bw_.sigma_q, rng);
        return out;
    }

    /// Index of the particle a sample would perturb; exposed for tests.
    std::size_t sample_index(RandomStream& rng) const {
        return rng.categorical_from_cumulative(cumulative_);
    }

    static constexpr double kMinLogMarginal = -707.0;  // ~log(DBL_MIN)

private:
    struct NormalizedTag {};

    Density(std::vector<Feature> particles, std::vector<double> weights, const Bandwidth& bw,
            NormalizedTag)
        : particles_(std::move(particles)), weights_(std::move(weights)), bw_(bw), log_c4_(log_c4(bw.sigma_q)) {
        if (particles_.empty()) throw std::invalid_argument("Density: needs at least one particle");
        if (particles_.size() != weights_.size())
            throw std::invalid_argument("Density: particle/weight count mismatch");
        double total = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) throw std::invalid_argument("Density: weights must be non-negative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("Density: weights must sum to 1");
        cumulative_.resize(weights_.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            acc += weights_[j];
            cumulative_[j] = acc;
        }
    }

    double log_weight(std::size_t j) const {
        return weights_[j] > 0.0 ? std::log(weights_[j]) : kNegInf;
    }

    Feature perturb(const Feature& base, RandomStream& rng) const {
        Pose v;
        v.p = base.v.p + bw_.sigma_p * rng.gauss3();
        v.q = sample_theta(base.v.q, bw_.sigma_q, rng);
        return Feature(v, base.r + bw_.sigma_r * rng.gauss2());
    }

    std::vector<Feature> particles_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    Bandwidth bw_;
    double log_c4_;
};

}  // namespace graspkde
