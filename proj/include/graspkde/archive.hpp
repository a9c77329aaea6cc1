#pragma once

#include <filesystem>

#include "graspkde/model.hpp"

namespace graspkde {

inline constexpr int kArchiveVersion = 1;

/// Single JSON file holding the hand, the config, and every grasp type's
/// learned models, with particle sets as flat numeric arrays. Weights and
/// poses keep their exact bit patterns through a round trip, so
/// write -> read -> write is byte-identical. Loading a different
/// format_version is a DataError.
void save_archive(const TrainedModels& models, const std::filesystem::path& path);
TrainedModels load_archive(const std::filesystem::path& path);

}  // namespace graspkde
