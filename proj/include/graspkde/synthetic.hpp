#pragma once

#include <string>

#include <Eigen/Core>

#include "graspkde/cloud.hpp"
#include "graspkde/pose.hpp"
#include "graspkde/random.hpp"

namespace graspkde {

enum class Shape { Sphere, Cylinder, Box, Ellipsoid };

/// Maps "sphere" | "cylinder" | "box" | "ellipsoid" to the enum, throwing
/// DataError for anything else.
Shape parse_shape(const std::string& name);

/// Single-view scan of a primitive. Points are drawn uniformly by area over
/// the full surface at the requested density, then back-face culled against
/// the viewpoint, which is what a depth camera facing the object would keep.
struct ShapeSpec {
    Shape shape = Shape::Sphere;
    // sphere: radius in dims[0]; cylinder: radius, height; box: edge lengths;
    // ellipsoid: semi-axes.
    Eigen::Vector3d dims = Eigen::Vector3d::Zero();
    double density = 1e5;  // points per square meter of surface
    Eigen::Vector3d viewpoint = Eigen::Vector3d(0.0, 0.0, 1.0);
    double noise = 0.0;  // stddev of isotropic Gaussian position noise, meters
    Pose pose;           // placement of the shape in the world frame
};

/// Total surface area of the primitive, meters squared. Ellipsoid area is
/// computed by quadrature; the others are closed-form.
double surface_area(const ShapeSpec& spec);

/// Generates the culled cloud. The cloud's viewpoint field is set from the
/// spec. Throws DataError on invalid dimensions or when nothing survives
/// culling (viewpoint inside the shape).
PointCloud generate_cloud(const ShapeSpec& spec, RandomStream& rng);

}  // namespace graspkde
