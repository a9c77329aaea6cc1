#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "graspkde/config.hpp"
#include "graspkde/errors.hpp"
#include "graspkde/hand.hpp"
#include "graspkde/pose.hpp"

namespace graspkde::detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key, const std::string& where) {
    const auto it = j.find(key);
    if (it == j.end()) throw DataError(where + ": missing key '" + key + "'");
    return *it;
}

inline double require_number(const json& j, const std::string& key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw DataError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

/// Pose as a flat [px, py, pz, qw, qx, qy, qz] array. Loading checks the
/// quaternion is unit within 1e-6 but keeps its bits untouched, so a file
/// written from a loaded pose is byte-identical.
inline json pose_to_json(const Pose& v) {
    return json::array(
        {v.p.x(), v.p.y(), v.p.z(), v.q.w(), v.q.x(), v.q.y(), v.q.z()});
}

inline Pose pose_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 7)
        throw DataError(where + ": pose must be a 7-element array");
    for (const json& v : j)
        if (!v.is_number()) throw DataError(where + ": pose entries must be numbers");
    Pose out;
    out.p = Eigen::Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
    out.q = Eigen::Quaterniond(j[3].get<double>(), j[4].get<double>(), j[5].get<double>(),
                               j[6].get<double>());
    if (std::abs(out.q.norm() - 1.0) > 1e-6)
        throw DataError(where + ": quaternion is not unit length");
    return out;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw DataError(where + ": expected an array");
    Eigen::VectorXd out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw DataError(where + ": entries must be numbers");
        out[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return out;
}

json hand_to_json(const HandDescription& hand);
HandDescription hand_from_json(const json& j);
json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const json& j);
json config_to_json(const RunConfig& c);
RunConfig config_from_json(const json& j);

}  // namespace graspkde::detail
