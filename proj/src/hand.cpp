#include "graspkde/hand.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graspkde/density.hpp"
#include "graspkde/errors.hpp"

namespace graspkde {

HandDescription::HandDescription(std::vector<HandLink> links, Eigen::VectorXd synergy)
    : links_(std::move(links)), synergy_(std::move(synergy)) {
    if (links_.empty()) throw DataError("HandDescription: needs at least one link");
    if (links_[0].parent != -1 || links_[0].joint_axis.has_value())
        throw DataError("HandDescription: link 0 must be the palm (parent -1, no joint)");
    joint_index_.resize(links_.size(), -1);
    int joints = 0;
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const HandLink& l = links_[i];
        if (i > 0 && (l.parent < 0 || l.parent >= static_cast<int>(i)))
            throw DataError("HandDescription: link " + std::to_string(i) +
                            " parent must precede it in the list");
        if (l.joint_axis) {
            if (l.joint_axis->norm() < 1e-12)
                throw DataError("HandDescription: zero joint axis on link " + std::to_string(i));
            if (!(l.limit_lo <= l.limit_hi))
                throw DataError("HandDescription: bad joint limits on link " + std::to_string(i));
            joint_index_[i] = joints++;
        }
        validate(l.geometry);
    }
    if (synergy_.size() != joints)
        throw DataError("HandDescription: synergy size must equal the joint count");
    if (!synergy_.allFinite()) throw DataError("HandDescription: synergy must be finite");
}

const HandState& Trajectory::equilibrium() const {
    if (points.empty()) throw DataError("Trajectory: empty");
    return points.back().state;
}

std::vector<Pose> forward_kinematics(const HandDescription& hand, const Pose& h_w,
                                     const Eigen::VectorXd& h_c) {
    if (h_c.size() != hand.dof())
        throw DataError("forward_kinematics: configuration dimension mismatch");
    std::vector<Pose> out(static_cast<std::size_t>(hand.num_links()));
    for (int i = 0; i < hand.num_links(); ++i) {
        const HandLink& l = hand.link(i);
        Pose local = l.mount;
        if (l.joint_axis) {
            const double theta = h_c[hand.joint_index(i)];
            if (theta < l.limit_lo || theta > l.limit_hi)
                throw DataError("forward_kinematics: joint " +
                                std::to_string(hand.joint_index(i)) + " outside its limits");
            Pose turn;
            turn.q = Eigen::Quaterniond(
                Eigen::AngleAxisd(theta, l.joint_axis->normalized()));
            local = compose(local, turn);
        }
        const Pose& base = l.parent < 0 ? h_w : out[static_cast<std::size_t>(l.parent)];
        out[static_cast<std::size_t>(i)] = compose(base, local);
    }
    return out;
}

Pose link_in_wrist(const HandDescription& hand, int link, const Eigen::VectorXd& h_c) {
    if (link < 0 || link >= hand.num_links()) throw DataError("link_in_wrist: bad link id");
    return forward_kinematics(hand, Pose{}, h_c)[static_cast<std::size_t>(link)];
}

Eigen::VectorXd synergy_targets(const HandDescription& hand, double h_m) {
    Eigen::VectorXd out(hand.dof());
    for (int i = 0; i < hand.num_links(); ++i) {
        const int j = hand.joint_index(i);
        if (j < 0) continue;
        const HandLink& l = hand.link(i);
        out[j] = std::clamp(hand.synergy()[j] * h_m, l.limit_lo, l.limit_hi);
    }
    return out;
}

JointLimits joint_limits(const HandDescription& hand) {
    JointLimits out{Eigen::VectorXd::Zero(hand.dof()), Eigen::VectorXd::Zero(hand.dof())};
    for (int i = 0; i < hand.num_links(); ++i) {
        const int j = hand.joint_index(i);
        if (j < 0) continue;
        out.lo[j] = hand.link(i).limit_lo;
        out.hi[j] = hand.link(i).limit_hi;
    }
    return out;
}

ConfigModel::ConfigModel(std::vector<Eigen::VectorXd> means, double sigma)
    : means_(std::move(means)), sigma_(sigma) {
    if (means_.empty()) throw DataError("ConfigModel: needs at least one component");
    if (!(sigma_ > 0.0)) throw DataError("ConfigModel: sigma must be positive");
    for (const Eigen::VectorXd& m : means_)
        if (m.size() != means_.front().size() || !m.allFinite())
            throw DataError("ConfigModel: inconsistent component dimensions");
}

double ConfigModel::log_eval(const Eigen::VectorXd& h_c) const {
    if (h_c.size() != means_.front().size())
        throw DataError("ConfigModel: dimension mismatch");
    const double d = static_cast<double>(h_c.size());
    const double log_norm = -0.5 * d * std::log(2.0 * M_PI * sigma_ * sigma_);
    std::vector<double> logs(means_.size());
    for (std::size_t n = 0; n < means_.size(); ++n)
        logs[n] = log_norm - (h_c - means_[n]).squaredNorm() / (2.0 * sigma_ * sigma_);
    return log_sum_exp(logs) - std::log(static_cast<double>(means_.size()));
}

double ConfigModel::eval(const Eigen::VectorXd& h_c) const { return std::exp(log_eval(h_c)); }

Eigen::VectorXd ConfigModel::sample(RandomStream& rng) const {
    const std::size_t n =
        std::min(means_.size() - 1,
                 static_cast<std::size_t>(rng.uniform() * static_cast<double>(means_.size())));
    Eigen::VectorXd out = means_[n];
    for (Eigen::Index d = 0; d < out.size(); ++d) out[d] += sigma_ * rng.gauss();
    return out;
}

ConfigModel build_config_model(const std::vector<Eigen::VectorXd>& equilibria, double sigma) {
    return ConfigModel(equilibria, sigma);
}

HandDescription make_default_hand() {
    const double kProximalLen = 0.05;
    const double kDistalLen = 0.04;
    std::vector<HandLink> links(5);

    links[0].name = "palm";
    links[0].geometry = {LinkGeometry::Type::Box, {0.12, 0.02, 0.04}};

    auto finger = [&](int base, const std::string& side, double x, const Eigen::Vector3d& axis) {
        HandLink& prox = links[static_cast<std::size_t>(base)];
        prox.name = side + "_proximal";
        prox.parent = 0;
        prox.mount.p = Eigen::Vector3d(x, 0.0, 0.02);
        prox.joint_axis = axis;
        prox.limit_lo = 0.0;
        prox.limit_hi = M_PI / 2.0;
        prox.geometry = {LinkGeometry::Type::Capsule, {0.008, kProximalLen, 0.0}};

        HandLink& dist = links[static_cast<std::size_t>(base + 1)];
        dist.name = side + "_distal";
        dist.parent = base;
        dist.mount.p = Eigen::Vector3d(0.0, 0.0, kProximalLen);
        dist.joint_axis = axis;
        dist.limit_lo = 0.0;
        dist.limit_hi = M_PI / 2.0;
        dist.geometry = {LinkGeometry::Type::Capsule, {0.007, kDistalLen, 0.0}};
    };
    finger(1, "left", -0.06, Eigen::Vector3d(0.0, 1.0, 0.0));
    finger(3, "right", 0.06, Eigen::Vector3d(0.0, -1.0, 0.0));

    return HandDescription(std::move(links), Eigen::VectorXd::Ones(4));
}

}  // namespace graspkde
