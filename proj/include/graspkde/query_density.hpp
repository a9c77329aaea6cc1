#pragma once

#include <vector>

#include "graspkde/contact_model.hpp"
#include "graspkde/exec.hpp"
#include "graspkde/object_model.hpp"
#include "graspkde/pose.hpp"
#include "graspkde/random.hpp"

namespace graspkde {

/// Pose-only KDE over world link poses: where one link wants to be on the
/// query object. Kernels with zero weight are kept (they record failed
/// conditioning draws) but are never selected when sampling.
class QueryDensity {
public:
    /// Weights are normalised to sum 1; their total must be positive.
    QueryDensity(std::vector<Pose> kernels, std::vector<double> weights, double sigma_p,
                 double sigma_q, int link);

    int link() const { return link_; }
    std::size_t size() const { return kernels_.size(); }
    const std::vector<Pose>& kernels() const { return kernels_; }
    const std::vector<double>& weights() const { return weights_; }
    double sigma_p() const { return sigma_p_; }
    double sigma_q() const { return sigma_q_; }

    double log_eval(const Pose& s) const;
    double eval(const Pose& s) const;

    Pose sample(RandomStream& rng) const;

private:
    std::vector<Pose> kernels_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    double sigma_p_;
    double sigma_q_;
    double log_c4_;
    int link_;
};

/// Builds the query density for one contact model on a query object: draw a
/// feature from the object model, condition the contact model's pose factor
/// on its curvature, sample a link-to-feature offset, and compose; the kernel
/// weight is the contact model's curvature marginal there. Work is
/// independent per kernel (substream j of rng), so serial and OpenMP runs
/// agree bitwise. Throws DegenerateError when every weight underflows to
/// zero (no curvature overlap between the object and the contact model).
QueryDensity compute_query_density(const ContactModel& cm, const ObjectModel& om, int k_q,
                                   double sigma_p, double sigma_q, RandomStream& rng,
                                   Exec exec = Exec::Serial);

}  // namespace graspkde
