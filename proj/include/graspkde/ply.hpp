#pragma once

#include <string>

#include "graspkde/cloud.hpp"

namespace graspkde {

/// Reads an ASCII PLY file with x, y, z vertex properties (32- or 64-bit
/// floats). A header line `comment viewpoint vx vy vz` sets the cloud's
/// viewpoint. Throws DataError with file:line context on malformed input and
/// on empty clouds.
PointCloud load_cloud(const std::string& path);

/// Writes the cloud as ASCII PLY, including the viewpoint comment. Values are
/// printed with enough digits to round-trip exactly.
void save_cloud(const PointCloud& cloud, const std::string& path);

}  // namespace graspkde
