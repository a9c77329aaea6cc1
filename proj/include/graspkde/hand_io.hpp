#pragma once

#include <filesystem>

#include "graspkde/hand.hpp"

namespace graspkde {

/// JSON hand description:
///   {"links": [{"name", "parent", "mount_pose": [px,py,pz,qw,qx,qy,qz],
///               "joint_axis": [x,y,z] | null, "limits": [lo,hi],
///               "geometry": {"type": "capsule"|"box", "dims": [..]}}, ...],
///    "synergy": [..]}
/// Loading throws DataError on unreadable files, malformed JSON, or schema
/// violations; structural invariants are checked by HandDescription itself.
HandDescription load_hand(const std::filesystem::path& path);
void save_hand(const HandDescription& hand, const std::filesystem::path& path);

/// JSON trajectory: {"states": [{"t", "hw": pose7, "hc": [..], "hm"}, ...]},
/// at least two states, ordered by t. The last state is the equilibrium.
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);

}  // namespace graspkde
