#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graspkde/density.hpp"
#include "graspkde/link_geometry.hpp"
#include "graspkde/object_model.hpp"

namespace graspkde {

/// Gaussian falloff exp(-lambda ||p - a||^2) of feature relevance with the
/// distance to the link surface, hard-cut to zero at delta.
struct ReceptiveFieldParams {
    double lambda = 2500.0;  // 1/m^2; response ~0.37 at 2 cm
    double delta = 0.04;     // m
};

/// Joint density over (pose of a link relative to a surface-feature frame,
/// curvature pair), learned from one grasp example on one object. A model
/// with no feature inside the receptive field is empty rather than an error;
/// its norm is zero and it carries no density.
struct ContactModel {
    std::optional<Density> density;
    double norm = 0.0;
    int link = -1;
    std::string source_id;

    bool empty() const { return !density.has_value(); }
};

/// Relevance of the feature at pose v to the link at link_pose, in [0, 1].
double receptive_field(const LinkGeometry& geom, const Pose& link_pose, const Pose& v,
                       const ReceptiveFieldParams& params);

/// One particle per in-range object feature: pose u_j = v_j^-1 o s_i (the
/// link pose relative to the feature frame), curvature r_j, weight
/// proportional to w_j * rf(v_j) and renormalised. The norm is the mean
/// receptive-field response over all object features, which lands in [0, 1]
/// for the uniform weights an object model carries.
ContactModel learn_contact_model(const ObjectModel& om, const LinkGeometry& geom, int link_id,
                                 const Pose& s_i, const ReceptiveFieldParams& rf,
                                 const Bandwidth& sigma_cm);

inline double contact_model_norm(const ContactModel& cm) { return cm.norm; }

/// Outcome of contact selection over a norms matrix (links x examples):
/// b(i, n) marks link i in-contact for example n, c(i) marks link i
/// instantiated for the grasp type.
struct ContactSelection {
    Eigen::ArrayXXi b;
    Eigen::ArrayXi c;
};

/// Per-example flags from the scale-free norm ratio
///   N_L N_O ||M_in|| / sum_jk ||M_jk|| > eta_i   (strict),
/// then per-link flags from the in-contact fraction
///   (1/N_O) sum_n b_in > zeta                    (strict).
/// Throws DataError on shape mismatch or negative norms and DegenerateError
/// when every norm is zero.
ContactSelection select_contacts(const Eigen::MatrixXd& norms, const Eigen::VectorXd& eta,
                                 double zeta);

/// Contact models of one grasp type after selection: mixed[i] is engaged
/// exactly when c(i) = 1 and holds the mixture of that link's selected
/// per-example models.
struct GraspTypeContacts {
    ContactSelection selection;
    std::vector<std::optional<ContactModel>> mixed;

    std::vector<int> selected_links() const;
};

/// Mixes per-example models per link: particle sets of the models with
/// b(i, n) = 1 are concatenated with each example's weights scaled by one
/// over the number of included examples, so the mixture evaluates to the
/// average of its components. The mixture's norm is the mean of the included
/// norms. models is indexed [link][example]; a selected link whose included
/// models are empty means the flags are inconsistent and throws
/// DegenerateError.
GraspTypeContacts mix_contact_models(const std::vector<std::vector<ContactModel>>& models,
                                     const ContactSelection& sel);

}  // namespace graspkde
