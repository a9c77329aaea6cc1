#include "graspkde/archive.hpp"

#include <fstream>
#include <string>

#include "graspkde/density.hpp"
#include "graspkde/errors.hpp"
#include "json_util.hpp"

namespace graspkde {

namespace {

using detail::json;

json contact_model_to_json(const ContactModel& cm) {
    json out;
    out["link"] = cm.link;
    out["source"] = cm.source_id;
    out["norm"] = cm.norm;
    const Bandwidth& bw = cm.density->bandwidth();
    out["sigma"] = json::array({bw.sigma_p, bw.sigma_q, bw.sigma_r});
    json particles = json::array();
    for (std::size_t j = 0; j < cm.density->size(); ++j) {
        const Feature& f = cm.density->particles()[j];
        particles.push_back(json::array({f.v.p.x(), f.v.p.y(), f.v.p.z(), f.v.q.w(), f.v.q.x(),
                                         f.v.q.y(), f.v.q.z(), f.r.x(), f.r.y(),
                                         cm.density->weights()[j]}));
    }
    out["particles"] = std::move(particles);
    return out;
}

ContactModel contact_model_from_json(const json& j, int num_links) {
    const std::string where = "archive contact model";
    ContactModel cm;
    const json& link = detail::require(j, "link", where);
    if (!link.is_number_integer()) throw DataError(where + ": link must be an integer");
    cm.link = link.get<int>();
    if (cm.link < 0 || cm.link >= num_links)
        throw DataError(where + ": link id " + std::to_string(cm.link) + " not in the hand");
    cm.source_id = detail::require(j, "source", where).get<std::string>();
    cm.norm = detail::require_number(j, "norm", where);

    const json& sigma = detail::require(j, "sigma", where);
    if (!sigma.is_array() || sigma.size() != 3)
        throw DataError(where + ": sigma must be a 3-element array");
    const Bandwidth bw(sigma[0].get<double>(), sigma[1].get<double>(), sigma[2].get<double>());

    const json& particles = detail::require(j, "particles", where);
    if (!particles.is_array() || particles.empty())
        throw DataError(where + ": particles must be a non-empty array");
    std::vector<Feature> features;
    std::vector<double> weights;
    features.reserve(particles.size());
    weights.reserve(particles.size());
    for (const json& row : particles) {
        if (!row.is_array() || row.size() != 10)
            throw DataError(where + ": each particle row has 10 numbers");
        Pose v;
        v.p = Eigen::Vector3d(row[0].get<double>(), row[1].get<double>(), row[2].get<double>());
        v.q = Eigen::Quaterniond(row[3].get<double>(), row[4].get<double>(), row[5].get<double>(),
                                 row[6].get<double>());
        if (std::abs(v.q.norm() - 1.0) > 1e-6)
            throw DataError(where + ": particle quaternion is not unit length");
        features.emplace_back(v, Eigen::Vector2d(row[7].get<double>(), row[8].get<double>()));
        weights.push_back(row[9].get<double>());
    }
    try {
        cm.density = Density::from_normalized(std::move(features), std::move(weights), bw);
    } catch (const std::invalid_argument& e) {
        throw DataError(where + ": " + e.what());
    }
    return cm;
}

json type_to_json(const GraspTypeModel& type) {
    json out;
    out["name"] = type.name;

    json b = json::array();
    for (Eigen::Index i = 0; i < type.contacts.selection.b.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index n = 0; n < type.contacts.selection.b.cols(); ++n)
            row.push_back(type.contacts.selection.b(i, n));
        b.push_back(std::move(row));
    }
    out["b"] = std::move(b);
    json c = json::array();
    for (Eigen::Index i = 0; i < type.contacts.selection.c.size(); ++i)
        c.push_back(type.contacts.selection.c[i]);
    out["c"] = std::move(c);

    json cms = json::array();
    for (const auto& cm : type.contacts.mixed)
        if (cm && !cm->empty()) cms.push_back(contact_model_to_json(*cm));
    out["contact_models"] = std::move(cms);

    json config_model;
    config_model["sigma"] = type.config.sigma();
    json means = json::array();
    for (const Eigen::VectorXd& m : type.config.means()) means.push_back(detail::vector_to_json(m));
    config_model["means"] = std::move(means);
    out["config_model"] = std::move(config_model);

    json trajs = json::array();
    for (const Trajectory& t : type.trajectories) trajs.push_back(detail::trajectory_to_json(t));
    out["trajectories"] = std::move(trajs);
    return out;
}

GraspTypeModel type_from_json(const json& j, int num_links) {
    const std::string where = "archive grasp type";
    const std::string name = detail::require(j, "name", where).get<std::string>();

    const json& b = detail::require(j, "b", where);
    const json& c = detail::require(j, "c", where);
    if (!b.is_array() || static_cast<int>(b.size()) != num_links)
        throw DataError(where + " '" + name + "': b must have one row per link");
    if (!c.is_array() || static_cast<int>(c.size()) != num_links)
        throw DataError(where + " '" + name + "': c must have one entry per link");
    GraspTypeContacts contacts;
    const std::size_t examples = b[0].size();
    contacts.selection.b = Eigen::ArrayXXi::Zero(num_links, static_cast<Eigen::Index>(examples));
    for (int i = 0; i < num_links; ++i) {
        if (!b[static_cast<std::size_t>(i)].is_array() || b[static_cast<std::size_t>(i)].size() != examples)
            throw DataError(where + " '" + name + "': ragged b matrix");
        for (std::size_t n = 0; n < examples; ++n)
            contacts.selection.b(i, static_cast<Eigen::Index>(n)) =
                b[static_cast<std::size_t>(i)][n].get<int>();
    }
    contacts.selection.c = Eigen::ArrayXi::Zero(num_links);
    for (int i = 0; i < num_links; ++i)
        contacts.selection.c[i] = c[static_cast<std::size_t>(i)].get<int>();

    contacts.mixed.assign(static_cast<std::size_t>(num_links), std::nullopt);
    for (const json& cm_j : detail::require(j, "contact_models", where)) {
        ContactModel cm = contact_model_from_json(cm_j, num_links);
        contacts.mixed[static_cast<std::size_t>(cm.link)] = std::move(cm);
    }
    for (int i = 0; i < num_links; ++i)
        if (contacts.selection.c[i] == 1 && !contacts.mixed[static_cast<std::size_t>(i)])
            throw DataError(where + " '" + name + "': selected link " + std::to_string(i) +
                            " has no contact model");

    const json& cm_j = detail::require(j, "config_model", where);
    const double sigma = detail::require_number(cm_j, "sigma", where);
    std::vector<Eigen::VectorXd> means;
    for (const json& m : detail::require(cm_j, "means", where))
        means.push_back(detail::vector_from_json(m, where));
    if (means.empty()) throw DataError(where + " '" + name + "': config model has no components");

    std::vector<Trajectory> trajectories;
    for (const json& t : detail::require(j, "trajectories", where))
        trajectories.push_back(detail::trajectory_from_json(t));

    try {
        return GraspTypeModel{name, std::move(contacts), ConfigModel(std::move(means), sigma),
                              std::move(trajectories)};
    } catch (const DataError& e) {
        throw DataError(where + " '" + name + "': " + e.what());
    }
}

}  // namespace

void save_archive(const TrainedModels& models, const std::filesystem::path& path) {
    json out;
    out["format_version"] = kArchiveVersion;
    out["config"] = detail::config_to_json(models.config);
    out["hand"] = detail::hand_to_json(models.hand);
    json types = json::array();
    for (const GraspTypeModel& type : models.types) types.push_back(type_to_json(type));
    out["grasp_types"] = std::move(types);

    std::ofstream file(path);
    if (!file) throw DataError("save_archive: cannot open " + path.string() + " for writing");
    file << out.dump(2) << '\n';
}

TrainedModels load_archive(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw DataError("load_archive: cannot open " + path.string());
    json j;
    try {
        file >> j;
    } catch (const json::parse_error& e) {
        throw DataError("load_archive: " + path.string() + ": " + e.what());
    }

    const json& version = detail::require(j, "format_version", "archive");
    if (!version.is_number_integer() || version.get<int>() != kArchiveVersion)
        throw DataError("load_archive: format_version " + version.dump() + " unsupported (want " +
                        std::to_string(kArchiveVersion) + ")");

    TrainedModels models{detail::hand_from_json(detail::require(j, "hand", "archive")),
                         {},
                         detail::config_from_json(detail::require(j, "config", "archive"))};
    for (const json& t : detail::require(j, "grasp_types", "archive"))
        models.types.push_back(type_from_json(t, models.hand.num_links()));
    return models;
}

}  // namespace graspkde
