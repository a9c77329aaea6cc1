#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "graspkde/link_geometry.hpp"
#include "graspkde/pose.hpp"
#include "graspkde/random.hpp"

namespace graspkde {

/// One rigid link in the kinematic tree. `mount` is the fixed pose of the
/// link frame in its parent's frame at zero joint angle; a revolute joint, if
/// present, rotates about `joint_axis` through the link origin, after the
/// mount. The palm (link 0) has parent -1 and no joint.
struct HandLink {
    std::string name;
    int parent = -1;
    Pose mount;
    std::optional<Eigen::Vector3d> joint_axis;
    double limit_lo = 0.0;
    double limit_hi = 0.0;
    LinkGeometry geometry;
};

/// Kinematic and geometric description of an underactuated hand. Joints are
/// numbered in link order; `joint_index(i)` maps a link to its slot in the
/// configuration vector, or -1 for rigidly mounted links. One motor drives
/// all joints through `synergy` (per-joint coefficient on the motor signal).
class HandDescription {
public:
    HandDescription(std::vector<HandLink> links, Eigen::VectorXd synergy);

    const std::vector<HandLink>& links() const { return links_; }
    const HandLink& link(int i) const { return links_[static_cast<std::size_t>(i)]; }
    int num_links() const { return static_cast<int>(links_.size()); }
    int dof() const { return static_cast<int>(synergy_.size()); }
    const Eigen::VectorXd& synergy() const { return synergy_; }
    int joint_index(int link) const { return joint_index_[static_cast<std::size_t>(link)]; }

private:
    std::vector<HandLink> links_;
    Eigen::VectorXd synergy_;
    std::vector<int> joint_index_;
};

struct HandState {
    Pose h_w;
    Eigen::VectorXd h_c;
    double h_m = 0.0;
};

struct TrajectoryPoint {
    double t = 0.0;
    HandState state;
};

/// Reach-to-grasp trajectory; the final point is the equilibrium state.
struct Trajectory {
    std::vector<TrajectoryPoint> points;

    const HandState& equilibrium() const;
};

/// World pose of every link for wrist pose h_w and configuration h_c.
/// Throws DataError on a dimension mismatch or a joint value outside its
/// limits.
std::vector<Pose> forward_kinematics(const HandDescription& hand, const Pose& h_w,
                                     const Eigen::VectorXd& h_c);

/// Pose of one link in the wrist frame (forward kinematics at identity).
Pose link_in_wrist(const HandDescription& hand, int link, const Eigen::VectorXd& h_c);

/// Free-space joint targets for motor signal h_m in [0, 1]: per-joint
/// clamp(synergy_i * h_m, limits).
Eigen::VectorXd synergy_targets(const HandDescription& hand, double h_m);

struct JointLimits {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    bool contains(const Eigen::VectorXd& h_c) const {
        return (h_c.array() >= lo.array()).all() && (h_c.array() <= hi.array()).all();
    }
};

JointLimits joint_limits(const HandDescription& hand);

/// Mixture of isotropic D-variate Gaussians over equilibrium configurations,
/// one component per training example, uniform weights.
class ConfigModel {
public:
    ConfigModel(std::vector<Eigen::VectorXd> means, double sigma);

    int dim() const { return static_cast<int>(means_.front().size()); }
    std::size_t components() const { return means_.size(); }
    const std::vector<Eigen::VectorXd>& means() const { return means_; }
    double sigma() const { return sigma_; }

    double log_eval(const Eigen::VectorXd& h_c) const;
    double eval(const Eigen::VectorXd& h_c) const;

    /// Uniform component choice, then an isotropic Gaussian perturbation.
    Eigen::VectorXd sample(RandomStream& rng) const;

private:
    std::vector<Eigen::VectorXd> means_;
    double sigma_;
};

ConfigModel build_config_model(const std::vector<Eigen::VectorXd>& equilibria, double sigma);

/// Two-finger, four-joint test hand: box palm, two capsule phalanges per
/// finger, fingers closing toward each other about y-parallel axes, palm
/// facing +z. Used by tests and the bundled demo data.
HandDescription make_default_hand();

}  // namespace graspkde
