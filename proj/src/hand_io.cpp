#include "graspkde/hand_io.hpp"

#include <fstream>

#include "graspkde/errors.hpp"
#include "json_util.hpp"

namespace graspkde {

namespace {

using detail::json;

json load_json(const std::filesystem::path& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw DataError(what + ": cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError(what + ": " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json(const json& j, const std::filesystem::path& path, const std::string& what) {
    std::ofstream out(path);
    if (!out) throw DataError(what + ": cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

json geometry_to_json(const LinkGeometry& g) {
    json out;
    if (g.type == LinkGeometry::Type::Capsule) {
        out["type"] = "capsule";
        out["dims"] = json::array({g.dims[0], g.dims[1]});
    } else {
        out["type"] = "box";
        out["dims"] = json::array({g.dims[0], g.dims[1], g.dims[2]});
    }
    return out;
}

LinkGeometry geometry_from_json(const json& j, const std::string& where) {
    LinkGeometry g;
    const json& type = detail::require(j, "type", where);
    const json& dims = detail::require(j, "dims", where);
    if (!dims.is_array()) throw DataError(where + ": dims must be an array");
    if (type == "capsule") {
        g.type = LinkGeometry::Type::Capsule;
        if (dims.size() != 2) throw DataError(where + ": capsule dims are [radius, length]");
        g.dims = Eigen::Vector3d(dims[0].get<double>(), dims[1].get<double>(), 0.0);
    } else if (type == "box") {
        g.type = LinkGeometry::Type::Box;
        if (dims.size() != 3) throw DataError(where + ": box dims are [x, y, z]");
        g.dims = Eigen::Vector3d(dims[0].get<double>(), dims[1].get<double>(), dims[2].get<double>());
    } else {
        throw DataError(where + ": geometry type must be 'capsule' or 'box'");
    }
    validate(g);
    return g;
}

HandState state_from_json(const json& j, const std::string& where) {
    HandState s;
    s.h_w = detail::pose_from_json(detail::require(j, "hw", where), where);
    s.h_c = detail::vector_from_json(detail::require(j, "hc", where), where);
    s.h_m = detail::require_number(j, "hm", where);
    return s;
}

json state_to_json(const HandState& s) {
    json out;
    out["hw"] = detail::pose_to_json(s.h_w);
    out["hc"] = detail::vector_to_json(s.h_c);
    out["hm"] = s.h_m;
    return out;
}

}  // namespace

namespace detail {

json hand_to_json(const HandDescription& hand) {
    json out;
    out["links"] = json::array();
    for (const HandLink& l : hand.links()) {
        json link;
        link["name"] = l.name;
        link["parent"] = l.parent;
        link["mount_pose"] = pose_to_json(l.mount);
        if (l.joint_axis) {
            link["joint_axis"] =
                json::array({l.joint_axis->x(), l.joint_axis->y(), l.joint_axis->z()});
            link["limits"] = json::array({l.limit_lo, l.limit_hi});
        } else {
            link["joint_axis"] = nullptr;
        }
        link["geometry"] = geometry_to_json(l.geometry);
        out["links"].push_back(std::move(link));
    }
    out["synergy"] = vector_to_json(hand.synergy());
    return out;
}

HandDescription hand_from_json(const json& j) {
    const std::string where = "hand description";
    const json& links_j = require(j, "links", where);
    if (!links_j.is_array() || links_j.empty())
        throw DataError(where + ": links must be a non-empty array");
    std::vector<HandLink> links;
    for (const json& lj : links_j) {
        HandLink l;
        l.name = require(lj, "name", where).get<std::string>();
        const json& parent = require(lj, "parent", where);
        if (!parent.is_number_integer()) throw DataError(where + ": parent must be an integer");
        l.parent = parent.get<int>();
        l.mount = pose_from_json(require(lj, "mount_pose", where), where);
        const json& axis = require(lj, "joint_axis", where);
        if (!axis.is_null()) {
            if (!axis.is_array() || axis.size() != 3)
                throw DataError(where + ": joint_axis must be null or a 3-element array");
            l.joint_axis = Eigen::Vector3d(axis[0].get<double>(), axis[1].get<double>(),
                                           axis[2].get<double>());
            const json& limits = require(lj, "limits", where);
            if (!limits.is_array() || limits.size() != 2)
                throw DataError(where + ": limits must be a 2-element array");
            l.limit_lo = limits[0].get<double>();
            l.limit_hi = limits[1].get<double>();
        }
        l.geometry = geometry_from_json(require(lj, "geometry", where), where);
        links.push_back(std::move(l));
    }
    const Eigen::VectorXd synergy = vector_from_json(require(j, "synergy", where), where);
    try {
        return HandDescription(std::move(links), synergy);
    } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
    }
}

json trajectory_to_json(const Trajectory& traj) {
    json out;
    out["states"] = json::array();
    for (const TrajectoryPoint& pt : traj.points) {
        json s = state_to_json(pt.state);
        s["t"] = pt.t;
        out["states"].push_back(std::move(s));
    }
    return out;
}

Trajectory trajectory_from_json(const json& j) {
    const std::string where = "trajectory";
    const json& states = require(j, "states", where);
    if (!states.is_array() || states.size() < 2)
        throw DataError(where + ": needs at least two states");
    Trajectory out;
    double prev_t = -std::numeric_limits<double>::infinity();
    for (const json& sj : states) {
        TrajectoryPoint pt;
        pt.t = require_number(sj, "t", where);
        if (!(pt.t > prev_t)) throw DataError(where + ": states must be ordered by t");
        prev_t = pt.t;
        pt.state = state_from_json(sj, where);
        out.points.push_back(std::move(pt));
    }
    return out;
}

}  // namespace detail

HandDescription load_hand(const std::filesystem::path& path) {
    return detail::hand_from_json(load_json(path, "load_hand"));
}

void save_hand(const HandDescription& hand, const std::filesystem::path& path) {
    write_json(detail::hand_to_json(hand), path, "save_hand");
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    return detail::trajectory_from_json(load_json(path, "load_trajectory"));
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
    write_json(detail::trajectory_to_json(traj), path, "save_trajectory");
}

}  // namespace graspkde
