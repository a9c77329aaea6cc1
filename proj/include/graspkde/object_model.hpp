#pragma once

#include <cstddef>
#include <string>

#include "graspkde/density.hpp"
#include "graspkde/surface_features.hpp"

namespace graspkde {

/// KDE over the surface features of one object: the empirical feature
/// distribution smoothed by the kernel bandwidth. Immutable once built.
struct ObjectModel {
    Density density;
    std::string source_id;
};

/// One particle per feature, every weight exactly 1/K. Throws DegenerateError
/// when the feature set is empty.
ObjectModel build_object_model(const SurfaceFeatureSet& features, const Bandwidth& sigma_x,
                               std::string source_id = "");

/// As above, but when the set exceeds max_particles it is first subsampled
/// uniformly without replacement (keeping cloud order), which bounds the cost
/// of the downstream contact-model sums. A cap of 0 disables subsampling.
ObjectModel build_object_model(const SurfaceFeatureSet& features, const Bandwidth& sigma_x,
                               std::size_t max_particles, RandomStream& rng,
                               std::string source_id = "");

}  // namespace graspkde
