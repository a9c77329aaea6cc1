#include "graspkde/contact_model.hpp"

#include <cmath>
#include <utility>

#include "graspkde/errors.hpp"

namespace graspkde {

double receptive_field(const LinkGeometry& geom, const Pose& link_pose, const Pose& v,
                       const ReceptiveFieldParams& params) {
    const Eigen::Vector3d a = closest_surface_point(geom, link_pose, v.p);
    const double dist = (v.p - a).norm();
    if (dist >= params.delta) return 0.0;
    return std::exp(-params.lambda * dist * dist);
}

ContactModel learn_contact_model(const ObjectModel& om, const LinkGeometry& geom, int link_id,
                                 const Pose& s_i, const ReceptiveFieldParams& rf,
                                 const Bandwidth& sigma_cm) {
    const auto& particles = om.density.particles();
    const auto& weights = om.density.weights();

    std::vector<Feature> kept;
    std::vector<double> kept_weights;
    double weight_total = 0.0;
    double response_total = 0.0;
    for (std::size_t j = 0; j < particles.size(); ++j) {
        const double response = receptive_field(geom, s_i, particles[j].v, rf);
        weight_total += weights[j];
        response_total += weights[j] * response;
        if (response > 0.0) {
            kept.emplace_back(compose(inverse(particles[j].v), s_i), particles[j].r);
            kept_weights.push_back(weights[j] * response);
        }
    }

    ContactModel cm;
    cm.link = link_id;
    cm.source_id = om.source_id;
    cm.norm = response_total / weight_total;
    if (kept.empty()) return cm;

    double kept_total = 0.0;
    for (double w : kept_weights) kept_total += w;
    for (double& w : kept_weights) w /= kept_total;
    cm.density.emplace(std::move(kept), std::move(kept_weights), sigma_cm);
    return cm;
}

ContactSelection select_contacts(const Eigen::MatrixXd& norms, const Eigen::VectorXd& eta,
                                 double zeta) {
    const Eigen::Index n_links = norms.rows();
    const Eigen::Index n_examples = norms.cols();
    if (n_links == 0 || n_examples == 0)
        throw DataError("select_contacts: empty norms matrix");
    if (eta.size() != n_links)
        throw DataError("select_contacts: eta must carry one threshold per link");
    if ((norms.array() < 0.0).any() || !norms.allFinite())
        throw DataError("select_contacts: norms must be finite and non-negative");

    const double total = norms.sum();
    if (!(total > 0.0))
        throw DegenerateError("select_contacts: every contact model norm is zero");

    ContactSelection sel;
    sel.b = Eigen::ArrayXXi::Zero(n_links, n_examples);
    sel.c = Eigen::ArrayXi::Zero(n_links);
    const double scale = static_cast<double>(n_links) * static_cast<double>(n_examples) / total;
    for (Eigen::Index i = 0; i < n_links; ++i) {
        int in_contact = 0;
        for (Eigen::Index n = 0; n < n_examples; ++n) {
            if (scale * norms(i, n) > eta[i]) {
                sel.b(i, n) = 1;
                ++in_contact;
            }
        }
        if (static_cast<double>(in_contact) / static_cast<double>(n_examples) > zeta) sel.c[i] = 1;
    }
    return sel;
}

std::vector<int> GraspTypeContacts::selected_links() const {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < selection.c.size(); ++i)
        if (selection.c[i] == 1) out.push_back(static_cast<int>(i));
    return out;
}

GraspTypeContacts mix_contact_models(const std::vector<std::vector<ContactModel>>& models,
                                     const ContactSelection& sel) {
    const auto n_links = static_cast<std::size_t>(sel.b.rows());
    const auto n_examples = static_cast<std::size_t>(sel.b.cols());
    if (models.size() != n_links)
        throw DataError("mix_contact_models: model rows do not match selection flags");
    for (const auto& row : models)
        if (row.size() != n_examples)
            throw DataError("mix_contact_models: model columns do not match selection flags");

    GraspTypeContacts out;
    out.selection = sel;
    out.mixed.resize(n_links);
    for (std::size_t i = 0; i < n_links; ++i) {
        if (sel.c[static_cast<Eigen::Index>(i)] != 1) continue;

        std::vector<const ContactModel*> included;
        for (std::size_t n = 0; n < n_examples; ++n)
            if (sel.b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) == 1)
                included.push_back(&models[i][n]);
        for (const ContactModel* cm : included)
            if (cm->empty())
                throw DegenerateError("mix_contact_models: selected link " + std::to_string(i) +
                                      " includes an empty contact model");
        if (included.empty())
            throw DegenerateError("mix_contact_models: selected link " + std::to_string(i) +
                                  " has no included examples");

        std::vector<Feature> particles;
        std::vector<double> weights;
        const double share = 1.0 / static_cast<double>(included.size());
        double norm_sum = 0.0;
        std::string source;
        for (const ContactModel* cm : included) {
            const Density& d = *cm->density;
            particles.insert(particles.end(), d.particles().begin(), d.particles().end());
            for (double w : d.weights()) weights.push_back(share * w);
            norm_sum += cm->norm;
            source += source.empty() ? cm->source_id : "+" + cm->source_id;
        }
        ContactModel mixed;
        mixed.link = included.front()->link;
        mixed.source_id = std::move(source);
        mixed.norm = norm_sum * share;
        mixed.density.emplace(std::move(particles), std::move(weights),
                              included.front()->density->bandwidth());
        out.mixed[i] = std::move(mixed);
    }
    return out;
}

}  // namespace graspkde
