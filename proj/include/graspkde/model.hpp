#pragma once

#include <string>
#include <vector>

#include "graspkde/config.hpp"
#include "graspkde/contact_model.hpp"
#include "graspkde/hand.hpp"

namespace graspkde {

/// Everything learned for one grasp type: mixed contact models with their
/// selection flags, the equilibrium configuration mixture, and the training
/// reach trajectories kept for transfer.
struct GraspTypeModel {
    std::string name;
    GraspTypeContacts contacts;
    ConfigModel config;
    std::vector<Trajectory> trajectories;
};

struct TrainedModels {
    HandDescription hand;
    std::vector<GraspTypeModel> types;
    RunConfig config;
};

}  // namespace graspkde
