#include "graspkde/object_model.hpp"

#include <algorithm>
#include <utility>

#include "graspkde/errors.hpp"

namespace graspkde {

namespace {

ObjectModel from_particles(std::vector<Feature> particles, const Bandwidth& bw, std::string source_id) {
    if (particles.empty())
        throw DegenerateError("build_object_model: feature set is empty");
    const std::vector<double> weights(particles.size(), 1.0 / static_cast<double>(particles.size()));
    return ObjectModel{Density(std::move(particles), weights, bw), std::move(source_id)};
}

}  // namespace

ObjectModel build_object_model(const SurfaceFeatureSet& features, const Bandwidth& sigma_x,
                               std::string source_id) {
    return from_particles(features.features, sigma_x, std::move(source_id));
}

ObjectModel build_object_model(const SurfaceFeatureSet& features, const Bandwidth& sigma_x,
                               std::size_t max_particles, RandomStream& rng, std::string source_id) {
    if (max_particles == 0 || features.features.size() <= max_particles)
        return from_particles(features.features, sigma_x, std::move(source_id));
    std::vector<Feature> kept;
    kept.reserve(max_particles);
    std::sample(features.features.begin(), features.features.end(), std::back_inserter(kept),
                max_particles, rng.engine());
    return from_particles(std::move(kept), sigma_x, std::move(source_id));
}

}  // namespace graspkde
