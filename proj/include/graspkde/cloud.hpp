#pragma once

#include <vector>

#include <Eigen/Core>

namespace graspkde {

/// Point cloud plus the sensor position it was captured from. The viewpoint
/// disambiguates normal orientation during feature extraction; it defaults to
/// the origin when the source file does not record one.
struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    Eigen::Vector3d viewpoint = Eigen::Vector3d::Zero();
};

}  // namespace graspkde
